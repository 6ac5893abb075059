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

#ifndef GRINDOPT_NELDER_MEAD_HPP
#define GRINDOPT_NELDER_MEAD_HPP

#include <functional>

#include <Eigen/Core>

namespace grindopt {

struct SimplexOptions {
  /// Initial edge length along each coordinate axis.
  double initial_step = 0.1;
  /// Stop once every vertex lies within this distance (max-norm) of the best.
  double x_tolerance = 1e-6;
  /// ... and the objective spread across vertices is below this.
  double f_tolerance = 1e-10;
  int max_evaluations = 500;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

/// Derivative-free Nelder-Mead minimization. The start point is one of the
/// initial vertices and the best vertex is never discarded, so the returned
/// value is never worse than objective(start). Non-finite objective values are
/// treated as +inf.
SimplexResult minimize_simplex(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const Eigen::VectorXd& start, const SimplexOptions& options = {});

}  // namespace grindopt

#endif  // GRINDOPT_NELDER_MEAD_HPP
