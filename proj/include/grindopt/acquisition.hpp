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

#ifndef GRINDOPT_ACQUISITION_HPP
#define GRINDOPT_ACQUISITION_HPP

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grindopt/gp.hpp"
#include "grindopt/trial.hpp"
#include "grindopt/types.hpp"

namespace grindopt {

using ModelMap = std::map<std::string, gp::GpModel, std::less<>>;
using ProbabilityMap = std::map<std::string, double, std::less<>>;

/// Standard deviations below this are treated as a deterministic posterior.
inline constexpr double kSigmaFloor = 1e-12;

double standard_normal_pdf(double z);
double standard_normal_cdf(double z);

/// Expected improvement below `best` for a minimization problem.
double expected_improvement(double mean, double variance, double best);

/// Posterior probability that the observable stays below `limit`.
double probability_feasible(double mean, double variance, double limit);

/// Lowest measured cost among trials whose every constraint observable is
/// within its limit.
std::optional<double> feasible_best(std::span<const TrialRecord> trials, std::span<const ConstraintSpec> constraints);

ProbabilityMap feasibility_probabilities(const Eigen::Ref<const Eigen::VectorXd>& x, const ModelMap& constraint_models,
                                         std::span<const ConstraintSpec> constraints);

/// EI times the product of feasibility probabilities. Without a feasible
/// incumbent the product alone is returned (pure feasibility search).
double constrained_ei(const Eigen::Ref<const Eigen::VectorXd>& x, const gp::GpModel& cost_model,
                      const ModelMap& constraint_models, std::span<const ConstraintSpec> constraints,
                      std::optional<double> best);

struct GridSearchOptions {
  int grid_n = 101;
  int refine_starts = 5;
  /// Simplex tolerance in unit-cube coordinates.
  double refine_tolerance = 1e-3;
  int refine_max_evaluations = 200;

  bool operator==(const GridSearchOptions&) const = default;
};

struct AcquisitionResult {
  Eigen::VectorXd argmax;
  double value = 0.0;
  ProbabilityMap feasibility_probabilities;
};

/// Regular grid over the domain, grid_n points per axis, first axis slowest.
std::vector<Eigen::VectorXd> grid_points(const Domain& domain, int grid_n);

/// Deterministic order for exact ties: lower value in the last coordinate
/// first (feed rate), then the one before it (cutting speed), and so on.
bool tie_break_less(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

/// Maximize `score` over a grid, then refine the best `refine_starts` grid
/// points with a bounded simplex search. The result is never worse than any
/// grid point.
AcquisitionResult maximize_on_grid(const std::function<double(const Eigen::VectorXd&)>& score, const Domain& domain,
                                   const GridSearchOptions& options = {});

/// argmax of the constrained EI over the domain. When the surface is zero
/// everywhere on the grid, falls back to the grid point with the largest
/// feasibility product.
AcquisitionResult maximize_acquisition(const gp::GpModel& cost_model, const ModelMap& constraint_models,
                                       std::span<const ConstraintSpec> constraints, std::optional<double> best,
                                       const Domain& domain, const GridSearchOptions& options = {});

}  // namespace grindopt

#endif  // GRINDOPT_ACQUISITION_HPP
