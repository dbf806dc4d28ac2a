// Copyright 2026 The cavarray Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "cavarray/config.hpp"
#include "cavarray/error.hpp"

namespace cavarray {
namespace {

using nlohmann::json;

TEST(Config, ModelRoundTrip) {
  ModelParams p;
  p.delta = 0.9;
  p.omega = 0.75;
  p.zJ = 0.2;
  p.zV = 0.6;
  p.t_ch = -0.3;
  p.n_max = 12;
  const ModelParams q = model_from_json(to_json(p));
  EXPECT_EQ(q.delta, p.delta);
  EXPECT_EQ(q.omega, p.omega);
  EXPECT_EQ(q.zJ, p.zJ);
  EXPECT_EQ(q.zV, p.zV);
  EXPECT_EQ(q.t_ch, p.t_ch);
  EXPECT_EQ(q.n_max, p.n_max);
  EXPECT_FALSE(model_from_json(to_json(ModelParams{})).n_max);
}

TEST(Config, ModelRejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(model_from_json(json{{"Delta", 1.0}}), Error);
  EXPECT_THROW(model_from_json(json{{"delta", "one"}}), Error);
  EXPECT_THROW(model_from_json(json::array()), Error);
  try {
    model_from_json(json{{"kappa", 1.0}, {"zz", 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Config, SeedVariants) {
  const Seed a = seed_from_json(json{{"kind", "AsymmetricCoherent"}, {"alpha_A", {0.2, -0.1}}});
  ASSERT_TRUE(std::holds_alternative<AsymmetricCoherent>(a));
  EXPECT_EQ(std::get<AsymmetricCoherent>(a).alpha_A, Complex(0.2, -0.1));
  EXPECT_EQ(std::get<AsymmetricCoherent>(a).alpha_B, Complex(0.0));

  const Seed f = seed_from_json(to_json(Seed{FockOccupation{0.3, 0.7}}));
  ASSERT_TRUE(std::holds_alternative<FockOccupation>(f));
  EXPECT_EQ(std::get<FockOccupation>(f).n_B, 0.7);

  EXPECT_TRUE(std::holds_alternative<SymmetricVacuum>(seed_from_json(json::object())));
  EXPECT_THROW(seed_from_json(json{{"kind", "Thermal"}}), Error);
  EXPECT_THROW(seed_from_json(json{{"kind", "FockOccupation"}, {"n_A", -1.0}}), Error);
  EXPECT_THROW(seed_from_json(json{{"kind", "SymmetricVacuum"}, {"n_A", 1.0}}), Error);
}

TEST(Config, ControlsRoundTrip) {
  IntegratorControls ic;
  ic.dt = 5e-3;
  ic.max_halvings = 3;
  EXPECT_EQ(integrator_from_json(to_json(ic)).dt, 5e-3);
  EXPECT_EQ(integrator_from_json(to_json(ic)).max_halvings, 3);

  ClassifierControls cc;
  cc.t_window = 150.0;
  EXPECT_EQ(classifier_from_json(to_json(cc)).t_window, 150.0);

  TruncationPolicy tp{4, 2, 20};
  const TruncationPolicy back = truncation_from_json(to_json(tp));
  EXPECT_EQ(back.initial_n_max, 4);
  EXPECT_EQ(back.step, 2);
  EXPECT_EQ(back.max_n_max, 20);
  EXPECT_THROW(truncation_from_json(json{{"cap", 3}}), Error);
}

TEST(Config, SweepRoundTrip) {
  SweepSpec s;
  s.base.hard_core = true;
  s.base.omega = 0.75;
  s.axis1 = {"U", 0.0, 2.0, 5};
  s.axis2 = SweepAxis{"zV", 0.0, 8.0, 9};
  s.t_ch_per_U = -1.0;
  s.workers = 3;
  const SweepSpec back = sweep_from_json(to_json(s));
  EXPECT_EQ(back.axis1.name, "U");
  EXPECT_EQ(back.axis1.n_points, 5);
  ASSERT_TRUE(back.axis2);
  EXPECT_EQ(back.axis2->max, 8.0);
  EXPECT_EQ(back.t_ch_per_U, -1.0);
  EXPECT_EQ(back.workers, 3);
  EXPECT_TRUE(back.base.hard_core);
  EXPECT_TRUE(std::holds_alternative<AsymmetricCoherent>(back.seed));
  EXPECT_EQ(to_json(back), to_json(s));
}

TEST(Config, SweepRejectsBadInput) {
  SweepSpec s;
  s.axis1 = {"zV", 0.0, 1.0, 3};
  json j = to_json(s);
  EXPECT_NO_THROW(sweep_from_json(j));
  j["axes"] = 1;
  EXPECT_THROW(sweep_from_json(j), Error);
  j.erase("axes");
  j["axis1"]["name"] = "kappa";
  EXPECT_THROW(sweep_from_json(j), Error);
}

TEST(Config, PhaseLabel) {
  PhaseLabel l;
  l.kind = PhaseKind::Oscillating;
  l.delta_n = 0.2;
  l.period = 19.7;
  const json j = to_json(l);
  EXPECT_EQ(j.at("phase"), "Oscillating");
  EXPECT_EQ(j.at("period"), 19.7);
}

}  // namespace
}  // namespace cavarray
