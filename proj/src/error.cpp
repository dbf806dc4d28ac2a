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

#include "cavarray/error.hpp"

namespace cavarray {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpace: return "invalid-space";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::TruncationRisk: return "truncation-risk";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::IntegrationFailure: return "integration-failure";
    case ErrorKind::Stiffness: return "stiffness";
    case ErrorKind::Inconclusive: return "inconclusive";
    case ErrorKind::Multistability: return "multistability";
    case ErrorKind::UndefinedCorrelator: return "undefined-correlator";
    case ErrorKind::DimensionCap: return "dimension-cap";
    case ErrorKind::NoSolution: return "no-solution";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace cavarray
