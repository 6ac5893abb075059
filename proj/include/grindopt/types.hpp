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

#ifndef GRINDOPT_TYPES_HPP
#define GRINDOPT_TYPES_HPP

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace grindopt {

/// A point in the optimization domain. Vector form is [cutting speed, feed rate].
struct ProcessParams {
  double cutting_speed_mps = 0.0;
  double feed_rate_mmpm = 0.0;

  Eigen::VectorXd to_vector() const { return Eigen::Vector2d(cutting_speed_mps, feed_rate_mmpm); }
  static ProcessParams from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) { return {x(0), x(1)}; }

  bool operator==(const ProcessParams&) const = default;
};

/// Axis-aligned box of admissible parameters (raw units).
struct Domain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// Cutting speed 12..30 m/s, feed rate 10..40 mm/min.
  static Domain grinding_default();

  Eigen::Index dim() const noexcept { return lower.size(); }
  /// Throws ValidationError unless lower < upper componentwise and finite.
  void validate() const;
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  bool contains(const ProcessParams& p) const { return contains(p.to_vector()); }
  Eigen::VectorXd clamp(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const;

  bool operator==(const Domain& other) const {
    return lower.size() == other.lower.size() && upper.size() == other.upper.size() && lower == other.lower &&
           upper == other.upper;
  }
};

/// An upper limit on a constraint observable together with the minimum
/// posterior probability at which a point counts as feasible.
struct ConstraintSpec {
  std::string name;
  double limit = 0.0;
  double p_min = 0.5;

  void validate() const;

  bool operator==(const ConstraintSpec&) const = default;
};

inline constexpr std::string_view kTemperature = "temperature";
inline constexpr std::string_view kRoughness = "roughness";

}  // namespace grindopt

#endif  // GRINDOPT_TYPES_HPP
