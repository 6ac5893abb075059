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

#ifndef GRINDOPT_CLI_HPP
#define GRINDOPT_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "grindopt/plant_sim.hpp"
#include "grindopt/session.hpp"

namespace grindopt {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kValidation = 2;
inline constexpr int kNotFound = 3;
inline constexpr int kNotConverged = 4;
inline constexpr int kNumerical = 5;
inline constexpr int kNoFeasibleRegion = 6;
}  // namespace exit_code

/// Seed of the plant noise for the trial with the given index.
std::uint64_t plant_run_seed(std::uint64_t session_seed, std::size_t trial_index);

/// Drive a session against the plant until it converges or reaches its trial
/// cap. With a log stream, writes one progress record per iteration:
///
///   iter=<n> cutting_speed_mps=<v> feed_rate_mmpm=<f> cost_U=<c>
///   feasible=<0|1> two_sigma_U=<x|na> rec_cutting_speed_mps=<v|na>
///   rec_feed_rate_mmpm=<f|na> expected_cost_U=<c|na> converged=<0|1>
///
/// (a single line per record, fields separated by one space).
Session run_simulation(const PlantModel& plant, const SessionConfig& config, std::ostream* log = nullptr);

/// Entry point behind the grindopt executable; returns the process exit
/// code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grindopt

#endif  // GRINDOPT_CLI_HPP
