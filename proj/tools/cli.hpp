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

#include <ostream>
#include <string>
#include <vector>

namespace cavarray::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidConfig = 2;
inline constexpr int kNumericalFailure = 3;
inline constexpr int kInconclusive = 4;

/// Environment variable overriding the worker count of the config.
inline constexpr const char* kWorkersEnv = "CAVARRAY_WORKERS";

/// Runs the command line `args` (without the program name). Results go to
/// `out`, machine-readable errors and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cavarray::cli
