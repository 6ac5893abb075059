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

#include "grindopt/types.hpp"

#include <cmath>

#include "grindopt/errors.hpp"

namespace grindopt {

Domain Domain::grinding_default() { return {Eigen::Vector2d(12.0, 10.0), Eigen::Vector2d(30.0, 40.0)}; }

void Domain::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw ValidationError("domain", "lower and upper bounds must be non-empty and of equal dimension");
  }
  if (!lower.allFinite() || !upper.allFinite()) {
    throw ValidationError("domain", "bounds must be finite");
  }
  if (!((upper - lower).array() > 0.0).all()) {
    throw ValidationError("domain", "lower bound must be below upper bound in every dimension");
  }
}

bool Domain::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != lower.size()) {
    return false;
  }
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

Eigen::VectorXd Domain::clamp(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

Eigen::VectorXd Domain::to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return ((x - lower).array() / (upper - lower).array()).matrix();
}

Eigen::VectorXd Domain::from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  return (lower.array() + u.array() * (upper - lower).array()).matrix();
}

void ConstraintSpec::validate() const {
  std::vector<FieldError> errors;
  if (name.empty()) {
    errors.push_back({"name", "must not be empty"});
  }
  if (!std::isfinite(limit)) {
    errors.push_back({name + ".limit", "must be finite"});
  }
  if (!(p_min > 0.0 && p_min < 1.0)) {
    errors.push_back({name + ".p_min", "must lie strictly between 0 and 1"});
  }
  if (!errors.empty()) {
    throw ValidationError(std::move(errors));
  }
}

}  // namespace grindopt
