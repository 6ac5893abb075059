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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "grindopt/errors.hpp"
#include "grindopt/plant_sim.hpp"

using namespace grindopt;

namespace {

double sample_sd(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) {
    mean += x;
  }
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

TEST_SUITE("plant_sim") {
  TEST_CASE("default plant reproduces the anchor interval") {
    const PlantModel plant = default_plant();
    const auto out = true_surfaces(plant, {24.3, 11.7});
    CHECK(out.dressing_interval_inserts == 7.5);
    CHECK_FALSE(out.censored);
    const auto trajectory = side_temperature_trajectory(plant, {24.3, 11.7});
    REQUIRE(trajectory.size() == 16);
    CHECK(trajectory[14] < plant.burn_threshold_c);
    CHECK(trajectory[15] >= plant.burn_threshold_c);
    CHECK((trajectory[14] + trajectory[15]) / 2 == doctest::Approx(plant.burn_threshold_c));
  }

  TEST_CASE("hot corner burns on the first side") {
    const auto out = true_surfaces(default_plant(), {30.0, 40.0});
    CHECK(out.dressing_interval_inserts == 0.5);
    CHECK(out.first_side_temperature_c >= 585.0);
  }

  TEST_CASE("negligible dulling runs to the cap") {
    PlantModel plant = default_plant();
    plant.dulling_slope_c_per_mm3 = 1e-12;
    const auto out = true_surfaces(plant, {12.0, 10.0});
    CHECK(out.dressing_interval_inserts == plant.insert_cap);
    CHECK(out.censored);
  }

  TEST_CASE("directional structure of the noiseless surfaces") {
    const PlantModel plant = default_plant();
    for (double v = 12.0; v < 30.0; v += 0.5) {
      for (double f = 10.0; f < 40.0; f += 0.5) {
        CHECK(plant_roughness(plant, {v + 0.5, f}) < plant_roughness(plant, {v, f}));
        CHECK(plant_first_side_temperature(plant, {v, f + 0.5}) > plant_first_side_temperature(plant, {v, f}));
        CHECK(plant_first_side_temperature(plant, {v + 0.5, f}) > plant_first_side_temperature(plant, {v, f}));
        const auto here = true_surfaces(plant, {v, f});
        CHECK(true_surfaces(plant, {v, f + 0.5}).dressing_interval_inserts <= here.dressing_interval_inserts);
        CHECK(here.dressing_interval_inserts > 0.0);
        CHECK(here.dressing_interval_inserts <= plant.insert_cap);
        CHECK(std::fmod(here.dressing_interval_inserts, 0.5) == 0.0);
      }
    }
  }

  TEST_CASE("noisy intervals stay on the half-insert lattice") {
    const PlantModel plant = default_plant();
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const ProcessParams p{12.0 + static_cast<double>(seed % 19), 10.0 + static_cast<double>(seed % 31)};
      const auto out = simulate_run(plant, p, seed);
      CHECK(out.dressing_interval_inserts > 0.0);
      CHECK(out.dressing_interval_inserts <= plant.insert_cap);
      CHECK(std::fmod(out.dressing_interval_inserts, 0.5) == 0.0);
      if (out.censored) {
        CHECK(out.dressing_interval_inserts == plant.insert_cap);
      }
    }
  }

  TEST_CASE("zero noise reduces to the noiseless surfaces") {
    PlantModel plant = default_plant();
    plant.roughness_noise_nm = 0.0;
    plant.temperature_noise_c = 0.0;
    for (const ProcessParams p : {ProcessParams{24.3, 11.7}, ProcessParams{12.0, 10.0}, ProcessParams{30.0, 40.0},
                                  ProcessParams{20.0, 15.0}}) {
      CHECK(simulate_run(plant, p, 99) == true_surfaces(plant, p));
    }
  }

  TEST_CASE("runs are reproducible per seed") {
    const PlantModel plant = default_plant();
    CHECK(simulate_run(plant, {22.0, 14.0}, 5) == simulate_run(plant, {22.0, 14.0}, 5));
    CHECK_FALSE(simulate_run(plant, {22.0, 14.0}, 5) == simulate_run(plant, {22.0, 14.0}, 6));
  }

  TEST_CASE("measurement noise matches the configured deviation") {
    const PlantModel plant = default_plant();
    std::vector<double> temperatures;
    std::vector<double> roughness;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      const auto out = simulate_run(plant, {20.0, 12.0}, seed);
      temperatures.push_back(out.first_side_temperature_c);
      roughness.push_back(out.max_roughness_nm);
    }
    CHECK(std::abs(sample_sd(temperatures) - plant.temperature_noise_c) <= 0.2 * plant.temperature_noise_c);
    CHECK(std::abs(sample_sd(roughness) - plant.roughness_noise_nm) <= 0.2 * plant.roughness_noise_nm);
  }

  TEST_CASE("calibration solves the crossing for any anchor") {
    for (double interval : {1.0, 2.5, 4.0, 6.5}) {
      const PlantModel plant = calibrate_dulling(PlantModel{}, {20.0, 12.0}, interval);
      CHECK(true_surfaces(plant, {20.0, 12.0}).dressing_interval_inserts == interval);
    }
    CHECK_THROWS_AS(calibrate_dulling(PlantModel{}, {30.0, 40.0}, 3.0), ContractViolation);
  }

  TEST_CASE("plant validation") {
    PlantModel plant = default_plant();
    CHECK_NOTHROW(plant.validate());
    plant.temperature_noise_c = -1.0;
    plant.insert_cap = 0.5;
    CHECK_THROWS_AS(plant.validate(), ValidationError);
  }

  TEST_CASE("dense-grid optimum is feasible and beats nearby feasible points") {
    const PlantModel plant = default_plant();
    const CostParams cost;
    const auto best = plant_constrained_optimum(plant, Domain::grinding_default(), cost, 585.0, 230.0, 201);
    CHECK(best.outcome.first_side_temperature_c < 585.0);
    CHECK(best.outcome.max_roughness_nm < 230.0);
    for (double dv = -1.0; dv <= 1.0; dv += 0.05) {
      for (double df = -1.0; df <= 1.0; df += 0.05) {
        const ProcessParams p{best.params.cutting_speed_mps + dv, best.params.feed_rate_mmpm + df};
        if (!Domain::grinding_default().contains(p)) {
          continue;
        }
        const auto out = true_surfaces(plant, p);
        if (out.first_side_temperature_c < 585.0 && out.max_roughness_nm < 230.0) {
          const double c = cost_per_insert(p.cutting_speed_mps, p.feed_rate_mmpm,
                                           removed_volume(out.dressing_interval_inserts, cost), cost);
          // A 201-point grid can miss a sliver of the sawtooth; allow one grid
          // step worth of feed-rate gain.
          CHECK(c >= best.cost_u - 0.01);
        }
      }
    }
  }
}
