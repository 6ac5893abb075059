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

#ifndef GRINDOPT_COST_MODEL_HPP
#define GRINDOPT_COST_MODEL_HPP

namespace grindopt {

/// Constants of the per-insert cost. Defaults describe the tungsten-carbide
/// insert / metal-bond diamond wheel setup. Cost unit "U" is abstract.
struct CostParams {
  double removed_volume_per_insert_mm3 = 310.6;
  double sides_per_insert = 2.0;
  double infeed_per_side_mm = 2.25;
  double dressing_time_s = 19.0;
  double wheel_layer_thickness_mm = 4.0;
  double wheel_dressing_wear_mm = 0.001;
  double dresser_thickness_mm = 65.0;
  double dresser_dressing_wear_mm = 0.1;
  double machine_rate_u_per_h = 100.0;
  double wheel_cost_u = 1500.0;
  double dresser_cost_u = 95.0;

  /// Throws ValidationError naming every non-positive field.
  void validate() const;

  bool operator==(const CostParams&) const = default;
};

/// Aggregated measurements of one run from a freshly dressed wheel.
struct TrialOutcome {
  double first_side_temperature_c = 0.0;
  double max_roughness_nm = 0.0;
  /// Inserts ground before burn; multiples of 0.5 (one side) in practice.
  double dressing_interval_inserts = 0.0;
  /// The run hit the insert cap without burn, so the interval is a lower bound.
  bool censored = false;

  void validate() const;

  bool operator==(const TrialOutcome&) const = default;
};

/// V_w = interval * V_g.
double removed_volume(double dressing_interval_inserts, const CostParams& params);

/// Machine time, wheel wear and dresser wear of one dressing cycle (U).
double dressing_overhead(const CostParams& params);

/// Grinding-time cost of one insert at feed rate f (U). Hours = s * a_pg / f / 60.
double grinding_time_cost(double feed_rate_mmpm, const CostParams& params);

/// Total cost to grind one insert: time cost plus the dressing overhead
/// amortized over V_w / V_g inserts. Cutting speed enters only through V_w.
double cost_per_insert(double cutting_speed_mps, double feed_rate_mmpm, double removed_volume_mm3,
                       const CostParams& params);

}  // namespace grindopt

#endif  // GRINDOPT_COST_MODEL_HPP
