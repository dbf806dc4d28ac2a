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

#include "cavarray/config.hpp"

#include <set>
#include <string>

#include "cavarray/error.hpp"

namespace cavarray {

using nlohmann::json;

namespace {

/// Reads known keys from an object and rejects anything left over.
class Reader {
 public:
  Reader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) fail("expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(std::string("bad value for '") + key + "'");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    T value{};
    get(key, value);
    out = value;
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::InvalidInput, context_ + ": " + msg);
  }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j, const std::string& context) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorKind::InvalidInput, context + ": expected a number or [re, im]");
}

}  // namespace

json to_json(const ModelParams& p) {
  json j = {{"delta", p.delta}, {"omega", p.omega}, {"zJ", p.zJ},
            {"U", p.U},         {"zV", p.zV},       {"kappa", p.kappa},
            {"t_ch", p.t_ch},   {"hard_core", p.hard_core}};
  j["n_max"] = p.n_max ? json(*p.n_max) : json(nullptr);
  return j;
}

ModelParams model_from_json(const json& j) {
  ModelParams p;
  Reader r(j, "model");
  r.get("delta", p.delta);
  r.get("omega", p.omega);
  r.get("zJ", p.zJ);
  r.get("U", p.U);
  r.get("zV", p.zV);
  r.get("kappa", p.kappa);
  r.get("t_ch", p.t_ch);
  r.get("hard_core", p.hard_core);
  r.get("n_max", p.n_max);
  r.finish();
  p.validate();
  return p;
}

json to_json(const Seed& s) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SymmetricVacuum>) {
          return {{"kind", "SymmetricVacuum"}};
        } else if constexpr (std::is_same_v<T, AsymmetricCoherent>) {
          return {{"kind", "AsymmetricCoherent"},
                  {"alpha_A", complex_json(v.alpha_A)},
                  {"alpha_B", complex_json(v.alpha_B)}};
        } else {
          return {{"kind", "FockOccupation"}, {"n_A", v.n_A}, {"n_B", v.n_B}};
        }
      },
      s);
}

Seed seed_from_json(const json& j) {
  Reader r(j, "seed");
  std::string kind = "SymmetricVacuum";
  r.get("kind", kind);
  Seed out;
  if (kind == "SymmetricVacuum") {
    out = SymmetricVacuum{};
  } else if (kind == "AsymmetricCoherent") {
    AsymmetricCoherent s;
    if (r.has("alpha_A")) s.alpha_A = complex_from(r.at("alpha_A"), "seed.alpha_A");
    if (r.has("alpha_B")) s.alpha_B = complex_from(r.at("alpha_B"), "seed.alpha_B");
    out = s;
  } else if (kind == "FockOccupation") {
    FockOccupation s;
    r.get("n_A", s.n_A);
    r.get("n_B", s.n_B);
    if (s.n_A < 0.0 || s.n_B < 0.0) r.fail("occupations must be non-negative");
    out = s;
  } else {
    r.fail("unknown seed kind '" + kind + "'");
  }
  r.finish();
  return out;
}

json to_json(const IntegratorControls& c) {
  return {{"dt", c.dt},
          {"sample_interval", c.sample_interval},
          {"max_halvings", c.max_halvings},
          {"trace_tol", c.trace_tol},
          {"hermiticity_tol", c.hermiticity_tol},
          {"positivity_tol", c.positivity_tol},
          {"top_population_tol", c.top_population_tol}};
}

IntegratorControls integrator_from_json(const json& j) {
  IntegratorControls c;
  Reader r(j, "integrator");
  r.get("dt", c.dt);
  r.get("sample_interval", c.sample_interval);
  r.get("max_halvings", c.max_halvings);
  r.get("trace_tol", c.trace_tol);
  r.get("hermiticity_tol", c.hermiticity_tol);
  r.get("positivity_tol", c.positivity_tol);
  r.get("top_population_tol", c.top_population_tol);
  r.finish();
  if (!(c.dt > 0.0) || !(c.sample_interval >= c.dt)) {
    r.fail("need 0 < dt <= sample_interval");
  }
  if (c.max_halvings < 0) r.fail("max_halvings must be >= 0");
  return c;
}

json to_json(const ClassifierControls& c) {
  return {{"t_transient", c.t_transient},
          {"t_window", c.t_window},
          {"eps_stationary", c.eps_stationary},
          {"eps_crystal", c.eps_crystal},
          {"recurrence_tol", c.recurrence_tol},
          {"min_cycle_amplitude", c.min_cycle_amplitude}};
}

ClassifierControls classifier_from_json(const json& j) {
  ClassifierControls c;
  Reader r(j, "classifier");
  r.get("t_transient", c.t_transient);
  r.get("t_window", c.t_window);
  r.get("eps_stationary", c.eps_stationary);
  r.get("eps_crystal", c.eps_crystal);
  r.get("recurrence_tol", c.recurrence_tol);
  r.get("min_cycle_amplitude", c.min_cycle_amplitude);
  r.finish();
  if (!(c.t_window > 0.0) || c.t_transient < 0.0) r.fail("need t_window > 0, t_transient >= 0");
  return c;
}

json to_json(const TruncationPolicy& t) {
  return {{"initial_n_max", t.initial_n_max}, {"step", t.step}, {"max_n_max", t.max_n_max}};
}

TruncationPolicy truncation_from_json(const json& j) {
  TruncationPolicy t;
  Reader r(j, "truncation");
  r.get("initial_n_max", t.initial_n_max);
  r.get("step", t.step);
  r.get("max_n_max", t.max_n_max);
  r.finish();
  if (t.initial_n_max < 1 || t.step < 1 || t.max_n_max < t.initial_n_max) {
    r.fail("need 1 <= initial_n_max <= max_n_max and step >= 1");
  }
  return t;
}

json to_json(const SweepAxis& a) {
  return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"n_points", a.n_points}};
}

SweepAxis axis_from_json(const json& j) {
  SweepAxis a;
  Reader r(j, "axis");
  r.get("name", a.name);
  r.get("min", a.min);
  r.get("max", a.max);
  r.get("n_points", a.n_points);
  r.finish();
  return a;
}

json to_json(const SweepSpec& s) {
  json j = {{"model", to_json(s.base)},
            {"axis1", to_json(s.axis1)},
            {"seed", to_json(s.seed)},
            {"n_A0", s.n_A0},
            {"n_B0", s.n_B0},
            {"t_final", s.t_final},
            {"integrator", to_json(s.integrator)},
            {"classifier", to_json(s.classifier)},
            {"truncation", to_json(s.truncation)},
            {"workers", s.workers}};
  j["axis2"] = s.axis2 ? to_json(*s.axis2) : json(nullptr);
  j["t_ch_per_U"] = s.t_ch_per_U ? json(*s.t_ch_per_U) : json(nullptr);
  return j;
}

SweepSpec sweep_from_json(const json& j) {
  SweepSpec s;
  Reader r(j, "sweep");
  if (r.has("model")) s.base = model_from_json(r.at("model"));
  if (!r.has("axis1")) r.fail("missing 'axis1'");
  s.axis1 = axis_from_json(r.at("axis1"));
  if (r.has("axis2") && !r.at("axis2").is_null()) s.axis2 = axis_from_json(r.at("axis2"));
  if (r.has("seed")) s.seed = seed_from_json(r.at("seed"));
  r.get("n_A0", s.n_A0);
  r.get("n_B0", s.n_B0);
  r.get("t_ch_per_U", s.t_ch_per_U);
  r.get("t_final", s.t_final);
  if (r.has("integrator")) s.integrator = integrator_from_json(r.at("integrator"));
  if (r.has("classifier")) s.classifier = classifier_from_json(r.at("classifier"));
  if (r.has("truncation")) s.truncation = truncation_from_json(r.at("truncation"));
  r.get("workers", s.workers);
  r.finish();
  s.validate();
  return s;
}

json to_json(const PhaseLabel& label) {
  json j = {{"phase", to_string(label.kind)},
            {"delta_n", label.delta_n},
            {"residual", label.residual}};
  j["period"] = label.period ? json(*label.period) : json(nullptr);
  return j;
}

}  // namespace cavarray
