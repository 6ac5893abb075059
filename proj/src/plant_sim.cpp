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

#include "grindopt/plant_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grindopt/errors.hpp"
#include "grindopt/random.hpp"

namespace grindopt {

namespace {

double side_volume(const PlantModel& plant) {
  return plant.removed_volume_per_insert_mm3 / static_cast<double>(plant.sides_per_insert);
}

int max_sides(const PlantModel& plant) {
  return static_cast<int>(std::floor(plant.insert_cap * plant.sides_per_insert + 1e-9));
}

// Interval from the number of sides ground before the first burn. A burn on
// the very first side still counts that side.
TrialOutcome summarize(const PlantModel& plant, double first_side_temperature, double max_roughness, int good_sides,
                       bool censored) {
  TrialOutcome out;
  out.first_side_temperature_c = first_side_temperature;
  out.max_roughness_nm = max_roughness;
  out.dressing_interval_inserts =
      static_cast<double>(std::max(good_sides, 1)) / static_cast<double>(plant.sides_per_insert);
  out.censored = censored;
  return out;
}

}  // namespace

void PlantModel::validate() const {
  std::vector<FieldError> errors;
  if (!(roughness_noise_nm >= 0.0) || !(temperature_noise_c >= 0.0)) {
    errors.push_back({"noise", "noise standard deviations must be non-negative"});
  }
  if (!(insert_cap >= 1.0)) {
    errors.push_back({"insert_cap", "must be at least 1"});
  }
  if (!(dulling_slope_c_per_mm3 > 0.0) || !std::isfinite(dulling_slope_c_per_mm3)) {
    errors.push_back({"dulling_slope_c_per_mm3", "must be strictly positive"});
  }
  if (!(removed_volume_per_insert_mm3 > 0.0)) {
    errors.push_back({"removed_volume_per_insert_mm3", "must be strictly positive"});
  }
  if (sides_per_insert < 1) {
    errors.push_back({"sides_per_insert", "must be at least 1"});
  }
  for (double v : {roughness_base_nm, roughness_speed_slope, roughness_feed_slope, temperature_base_c,
                   temperature_feed_slope, temperature_speed_slope, burn_threshold_c}) {
    if (!std::isfinite(v)) {
      errors.push_back({"plant", "surface coefficients must be finite"});
      break;
    }
  }
  if (!errors.empty()) {
    throw ValidationError(std::move(errors));
  }
}

PlantModel calibrate_dulling(PlantModel plant, const ProcessParams& anchor, double interval_inserts) {
  const double good_sides = interval_inserts * plant.sides_per_insert;
  const double headroom = plant.burn_threshold_c - plant_first_side_temperature(plant, anchor);
  if (good_sides < 1.0 || headroom <= 0.0) {
    throw ContractViolation("anchor must run at least one side below the burn threshold");
  }
  // Good sides 1..n sit below the threshold, side n+1 burns; put the crossing
  // at n - 0.5 side-volumes of accumulated removal.
  plant.dulling_slope_c_per_mm3 = headroom / ((good_sides - 0.5) * side_volume(plant));
  return plant;
}

PlantModel default_plant() { return calibrate_dulling(PlantModel{}, {24.3, 11.7}, 7.5); }

double plant_roughness(const PlantModel& plant, const ProcessParams& params) {
  return plant.roughness_base_nm + plant.roughness_speed_slope * params.cutting_speed_mps +
         plant.roughness_feed_slope * params.feed_rate_mmpm;
}

double plant_first_side_temperature(const PlantModel& plant, const ProcessParams& params) {
  return plant.temperature_base_c + plant.temperature_speed_slope * params.cutting_speed_mps +
         plant.temperature_feed_slope * params.feed_rate_mmpm;
}

std::vector<double> side_temperature_trajectory(const PlantModel& plant, const ProcessParams& params) {
  const double first = plant_first_side_temperature(plant, params);
  const double per_side = plant.dulling_slope_c_per_mm3 * side_volume(plant);
  std::vector<double> out(static_cast<std::size_t>(max_sides(plant)));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = first + per_side * static_cast<double>(k);
  }
  return out;
}

TrialOutcome true_surfaces(const PlantModel& plant, const ProcessParams& params) {
  const auto trajectory = side_temperature_trajectory(plant, params);
  const auto burn = std::find_if(trajectory.begin(), trajectory.end(),
                                 [&](double t) { return t >= plant.burn_threshold_c; });
  const int good = static_cast<int>(burn - trajectory.begin());
  return summarize(plant, trajectory.front(), plant_roughness(plant, params), good, burn == trajectory.end());
}

TrialOutcome simulate_run(const PlantModel& plant, const ProcessParams& params, std::uint64_t seed) {
  Rng rng(seed);
  const auto trajectory = side_temperature_trajectory(plant, params);
  const double roughness = plant_roughness(plant, params);

  auto noisy = [&](double mean, double sd) { return sd > 0.0 ? rng.normal(mean, sd) : mean; };

  double first = 0.0;
  int good = 0;
  bool censored = true;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double t = noisy(trajectory[k], plant.temperature_noise_c);
    if (k == 0) {
      first = t;
    }
    if (t >= plant.burn_threshold_c) {
      censored = false;
      break;
    }
    ++good;
  }

  // Roughness does not change with dulling here, so every insert of a run
  // shares one deviation and the run maximum equals that reading.
  const double max_roughness = noisy(roughness, plant.roughness_noise_nm);
  return summarize(plant, first, max_roughness, good, censored);
}

PlantOptimum plant_constrained_optimum(const PlantModel& plant, const Domain& domain, const CostParams& cost,
                                       double temperature_limit_c, double roughness_limit_nm, int grid_n) {
  PlantOptimum best;
  best.cost_u = std::numeric_limits<double>::infinity();
  Eigen::VectorXd u(2);
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      u << static_cast<double>(i) / (grid_n - 1), static_cast<double>(j) / (grid_n - 1);
      const auto params = ProcessParams::from_vector(domain.from_unit(u));
      const auto outcome = true_surfaces(plant, params);
      if (!(outcome.first_side_temperature_c < temperature_limit_c && outcome.max_roughness_nm < roughness_limit_nm)) {
        continue;
      }
      const double c = cost_per_insert(params.cutting_speed_mps, params.feed_rate_mmpm,
                                       removed_volume(outcome.dressing_interval_inserts, cost), cost);
      if (c < best.cost_u) {
        best = {params, c, outcome};
      }
    }
  }
  if (!std::isfinite(best.cost_u)) {
    throw NotFoundError("plant has no feasible point on the grid");
  }
  return best;
}

}  // namespace grindopt
