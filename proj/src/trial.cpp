// Copyright 2026 The grindopt Authors. All Rights Reserved.
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
// =============================================================================

#include "grindopt/trial.hpp"

namespace grindopt {

std::string_view to_string(TrialOrigin origin) {
  switch (origin) {
    case TrialOrigin::kRandomInit:
      return "random-init";
    case TrialOrigin::kAcquisition:
      return "acquisition";
    case TrialOrigin::kManual:
      return "manual";
  }
  return "manual";
}

std::optional<TrialOrigin> parse_origin(std::string_view name) {
  for (auto o : {TrialOrigin::kRandomInit, TrialOrigin::kAcquisition, TrialOrigin::kManual}) {
    if (to_string(o) == name) {
      return o;
    }
  }
  return std::nullopt;
}

std::optional<double> constraint_observable(const TrialRecord& trial, std::string_view constraint_name) {
  if (constraint_name == kTemperature) {
    return trial.outcome.first_side_temperature_c;
  }
  if (constraint_name == kRoughness) {
    return trial.outcome.max_roughness_nm;
  }
  return std::nullopt;
}

}  // namespace grindopt
