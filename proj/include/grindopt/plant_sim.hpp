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

#ifndef GRINDOPT_PLANT_SIM_HPP
#define GRINDOPT_PLANT_SIM_HPP

#include <cstdint>
#include <vector>

#include "grindopt/cost_model.hpp"
#include "grindopt/types.hpp"

namespace grindopt {

/// Synthetic cup-wheel grinding plant.
///
/// Roughness is affine in (v_s, f) and falls with cutting speed. The
/// temperature of side k after dressing is
///
///   T_k = T0 + a_v v_s + a_f f + d * V_{k-1},
///
/// where V_{k-1} is the volume removed by the k-1 preceding sides (dulling).
/// A side burns once T_k reaches the burn threshold; the dressing interval is
/// the count of burn-free sides, in inserts, and the run stops at the cap.
struct PlantModel {
  double roughness_base_nm = 581.5;
  double roughness_speed_slope = -15.0;  // nm per m/s
  double roughness_feed_slope = 0.5;     // nm per mm/min

  double temperature_base_c = -528.1;
  double temperature_feed_slope = 60.0;  // C per mm/min
  double temperature_speed_slope = 2.0;  // C per m/s
  double dulling_slope_c_per_mm3 = 25.0 / 155.3;

  double roughness_noise_nm = 10.0;
  double temperature_noise_c = 25.0;

  double burn_threshold_c = 585.0;
  double insert_cap = 8.0;
  double removed_volume_per_insert_mm3 = 310.6;
  int sides_per_insert = 2;

  void validate() const;

  bool operator==(const PlantModel&) const = default;
};

/// The default plant: dulling slope solved so that the run at 24.3 m/s,
/// 11.7 mm/min burns on the second side of the eighth insert (7.5 inserts),
/// with the threshold crossed midway between sides 15 and 16.
PlantModel default_plant();

/// Set the dulling slope so that the noiseless trajectory at `anchor` crosses
/// the burn threshold midway between the last good side and the burning side
/// of a run lasting `interval_inserts`.
PlantModel calibrate_dulling(PlantModel plant, const ProcessParams& anchor, double interval_inserts);

double plant_roughness(const PlantModel& plant, const ProcessParams& params);
double plant_first_side_temperature(const PlantModel& plant, const ProcessParams& params);

/// Noiseless side temperatures for a full run up to the cap.
std::vector<double> side_temperature_trajectory(const PlantModel& plant, const ProcessParams& params);

/// Noiseless outcome of one run.
TrialOutcome true_surfaces(const PlantModel& plant, const ProcessParams& params);

/// One run with seeded measurement noise on every side temperature and on the
/// run's roughness reading, aggregated the way the operator reports it
/// (first-side temperature, run-maximum roughness, interval at first burn).
TrialOutcome simulate_run(const PlantModel& plant, const ProcessParams& params, std::uint64_t seed);

/// Noiseless constrained optimum found by dense grid enumeration (grid_n per
/// axis): minimal cost subject to first-side temperature < limit and
/// roughness < limit.
struct PlantOptimum {
  ProcessParams params;
  double cost_u = 0.0;
  TrialOutcome outcome;
};
PlantOptimum plant_constrained_optimum(const PlantModel& plant, const Domain& domain, const CostParams& cost,
                                       double temperature_limit_c, double roughness_limit_nm, int grid_n = 1001);

}  // namespace grindopt

#endif  // GRINDOPT_PLANT_SIM_HPP
