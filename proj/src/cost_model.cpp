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

#include "grindopt/cost_model.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "grindopt/errors.hpp"

namespace grindopt {

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr double kMinutesPerHour = 60.0;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void CostParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"removed_volume_per_insert_mm3", removed_volume_per_insert_mm3},
      {"sides_per_insert", sides_per_insert},
      {"infeed_per_side_mm", infeed_per_side_mm},
      {"dressing_time_s", dressing_time_s},
      {"wheel_layer_thickness_mm", wheel_layer_thickness_mm},
      {"wheel_dressing_wear_mm", wheel_dressing_wear_mm},
      {"dresser_thickness_mm", dresser_thickness_mm},
      {"dresser_dressing_wear_mm", dresser_dressing_wear_mm},
      {"machine_rate_u_per_h", machine_rate_u_per_h},
      {"wheel_cost_u", wheel_cost_u},
      {"dresser_cost_u", dresser_cost_u},
  };
  std::vector<FieldError> errors;
  for (const auto& [name, value] : fields) {
    if (!positive_finite(value)) {
      errors.push_back({std::string("cost.") + name, "must be strictly positive"});
    }
  }
  if (!errors.empty()) {
    throw ValidationError(std::move(errors));
  }
}

void TrialOutcome::validate() const {
  std::vector<FieldError> errors;
  if (!positive_finite(first_side_temperature_c)) {
    errors.push_back({"first_side_temp_C", "must be strictly positive"});
  }
  if (!positive_finite(max_roughness_nm)) {
    errors.push_back({"max_roughness_nm", "must be strictly positive"});
  }
  if (!positive_finite(dressing_interval_inserts)) {
    errors.push_back({"dressing_interval_inserts", "must be strictly positive"});
  }
  if (!errors.empty()) {
    throw ValidationError(std::move(errors));
  }
}

double removed_volume(double dressing_interval_inserts, const CostParams& params) {
  if (!positive_finite(dressing_interval_inserts)) {
    throw ContractViolation("dressing interval must be strictly positive");
  }
  return dressing_interval_inserts * params.removed_volume_per_insert_mm3;
}

double dressing_overhead(const CostParams& params) {
  return params.machine_rate_u_per_h * params.dressing_time_s / kSecondsPerHour +
         params.wheel_cost_u * params.wheel_dressing_wear_mm / params.wheel_layer_thickness_mm +
         params.dresser_cost_u * params.dresser_dressing_wear_mm / params.dresser_thickness_mm;
}

double grinding_time_cost(double feed_rate_mmpm, const CostParams& params) {
  if (!positive_finite(feed_rate_mmpm)) {
    throw ContractViolation("feed rate must be strictly positive");
  }
  return params.machine_rate_u_per_h * params.sides_per_insert * params.infeed_per_side_mm / feed_rate_mmpm /
         kMinutesPerHour;
}

double cost_per_insert(double /*cutting_speed_mps*/, double feed_rate_mmpm, double removed_volume_mm3,
                       const CostParams& params) {
  if (!positive_finite(removed_volume_mm3)) {
    throw ContractViolation("removed volume must be strictly positive");
  }
  return grinding_time_cost(feed_rate_mmpm, params) +
         dressing_overhead(params) * params.removed_volume_per_insert_mm3 / removed_volume_mm3;
}

}  // namespace grindopt
