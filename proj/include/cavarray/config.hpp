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

#pragma once

#include <json.hpp>

#include "cavarray/dynamics.hpp"
#include "cavarray/model.hpp"
#include "cavarray/sweep.hpp"

namespace cavarray {

/// JSON conversions for configuration objects. Readers reject unknown keys
/// and type mismatches with InvalidInput; omitted keys keep their defaults.

nlohmann::json to_json(const ModelParams& p);
ModelParams model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Seed& s);
Seed seed_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IntegratorControls& c);
IntegratorControls integrator_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClassifierControls& c);
ClassifierControls classifier_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TruncationPolicy& t);
TruncationPolicy truncation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepAxis& a);
SweepAxis axis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepSpec& s);
SweepSpec sweep_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PhaseLabel& label);

}  // namespace cavarray
