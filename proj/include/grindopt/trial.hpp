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

#ifndef GRINDOPT_TRIAL_HPP
#define GRINDOPT_TRIAL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "grindopt/cost_model.hpp"
#include "grindopt/types.hpp"

namespace grindopt {

enum class TrialOrigin { kRandomInit, kAcquisition, kManual };

std::string_view to_string(TrialOrigin origin);
/// Inverse of to_string; nullopt for unknown names.
std::optional<TrialOrigin> parse_origin(std::string_view name);

struct TrialRecord {
  std::size_t index = 0;
  ProcessParams params;
  TrialOutcome outcome;
  double cost_u = 0.0;
  TrialOrigin origin = TrialOrigin::kManual;
  /// Manual trial recorded outside the session domain.
  bool out_of_domain = false;

  bool operator==(const TrialRecord&) const = default;
};

/// Measured value of a named constraint observable for one trial; nullopt for
/// names the trial does not measure.
std::optional<double> constraint_observable(const TrialRecord& trial, std::string_view constraint_name);

}  // namespace grindopt

#endif  // GRINDOPT_TRIAL_HPP
