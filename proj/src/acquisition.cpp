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

#include "grindopt/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "grindopt/errors.hpp"
#include "grindopt/nelder_mead.hpp"

namespace grindopt {

double standard_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(double mean, double variance, double best) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  const double improvement = best - mean;
  if (sigma < kSigmaFloor) {
    return std::max(improvement, 0.0);
  }
  const double z = improvement / sigma;
  return std::max(0.0, improvement * standard_normal_cdf(z) + sigma * standard_normal_pdf(z));
}

double probability_feasible(double mean, double variance, double limit) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  if (sigma < kSigmaFloor) {
    return mean < limit ? 1.0 : 0.0;
  }
  return standard_normal_cdf((limit - mean) / sigma);
}

std::optional<double> feasible_best(std::span<const TrialRecord> trials, std::span<const ConstraintSpec> constraints) {
  std::optional<double> best;
  for (const auto& trial : trials) {
    const bool feasible = std::all_of(constraints.begin(), constraints.end(), [&](const ConstraintSpec& c) {
      const auto value = constraint_observable(trial, c.name);
      return value && *value <= c.limit;
    });
    if (feasible && (!best || trial.cost_u < *best)) {
      best = trial.cost_u;
    }
  }
  return best;
}

ProbabilityMap feasibility_probabilities(const Eigen::Ref<const Eigen::VectorXd>& x, const ModelMap& constraint_models,
                                         std::span<const ConstraintSpec> constraints) {
  ProbabilityMap out;
  for (const auto& c : constraints) {
    const auto it = constraint_models.find(c.name);
    if (it == constraint_models.end()) {
      throw ContractViolation("no model for constraint '" + c.name + "'");
    }
    const auto p = it->second.predict(x);
    out[c.name] = probability_feasible(p.mean, p.variance, c.limit);
  }
  return out;
}

namespace {

double feasibility_product(const Eigen::Ref<const Eigen::VectorXd>& x, const ModelMap& constraint_models,
                           std::span<const ConstraintSpec> constraints) {
  double product = 1.0;
  for (const auto& [name, p] : feasibility_probabilities(x, constraint_models, constraints)) {
    product *= p;
  }
  return product;
}

struct Scored {
  Eigen::VectorXd x;
  double value;
};

// Larger value wins; exact ties resolved by tie_break_less.
bool better(const Scored& a, const Scored& b) {
  if (a.value != b.value) {
    return a.value > b.value;
  }
  return tie_break_less(a.x, b.x);
}

std::vector<Scored> score_grid(const std::function<double(const Eigen::VectorXd&)>& score, const Domain& domain,
                               int grid_n) {
  std::vector<Scored> out;
  for (auto& x : grid_points(domain, grid_n)) {
    const double v = score(x);
    out.push_back({std::move(x), v});
  }
  return out;
}

}  // namespace

std::vector<Eigen::VectorXd> grid_points(const Domain& domain, int grid_n) {
  if (grid_n < 2) {
    throw ContractViolation("grid needs at least two points per axis");
  }
  const Eigen::Index d = domain.dim();
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < d; ++i) {
    total *= static_cast<std::size_t>(grid_n);
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Eigen::VectorXd u(d);
  for (std::size_t k = 0; k < total; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      u(i) = static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(grid_n - 1);
    }
    out.push_back(domain.from_unit(u));
    for (Eigen::Index i = d - 1; i >= 0; --i) {
      auto& digit = idx[static_cast<std::size_t>(i)];
      if (++digit < grid_n) {
        break;
      }
      digit = 0;
    }
  }
  return out;
}

bool tie_break_less(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  for (Eigen::Index i = a.size() - 1; i >= 0; --i) {
    if (a(i) != b(i)) {
      return a(i) < b(i);
    }
  }
  return false;
}

AcquisitionResult maximize_on_grid(const std::function<double(const Eigen::VectorXd&)>& score, const Domain& domain,
                                   const GridSearchOptions& options) {
  domain.validate();
  std::vector<Scored> grid = score_grid(score, domain, options.grid_n);

  const auto n_starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.refine_starts, 0)), grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(n_starts, 1)),
                    grid.end(), better);
  Scored best = grid.front();

  SimplexOptions simplex;
  simplex.initial_step = 1.0 / static_cast<double>(options.grid_n - 1);
  simplex.x_tolerance = options.refine_tolerance;
  simplex.f_tolerance = 0.0;
  simplex.max_evaluations = options.refine_max_evaluations;

  auto unit_to_domain = [&](const Eigen::VectorXd& u) { return domain.from_unit(u.cwiseMax(0.0).cwiseMin(1.0)); };
  for (std::size_t s = 0; s < n_starts; ++s) {
    const auto res = minimize_simplex([&](const Eigen::VectorXd& u) { return -score(unit_to_domain(u)); },
                                      domain.to_unit(grid[s].x), simplex);
    Scored refined{unit_to_domain(res.x), 0.0};
    refined.value = score(refined.x);
    if (better(refined, best)) {
      best = std::move(refined);
    }
  }
  return {best.x, best.value, {}};
}

double constrained_ei(const Eigen::Ref<const Eigen::VectorXd>& x, const gp::GpModel& cost_model,
                      const ModelMap& constraint_models, std::span<const ConstraintSpec> constraints,
                      std::optional<double> best) {
  const double feasibility = feasibility_product(x, constraint_models, constraints);
  if (!best) {
    return feasibility;
  }
  if (feasibility == 0.0) {
    return 0.0;
  }
  const auto p = cost_model.predict(x);
  return expected_improvement(p.mean, p.variance, *best) * feasibility;
}

AcquisitionResult maximize_acquisition(const gp::GpModel& cost_model, const ModelMap& constraint_models,
                                       std::span<const ConstraintSpec> constraints, std::optional<double> best,
                                       const Domain& domain, const GridSearchOptions& options) {
  auto acquisition = [&](const Eigen::VectorXd& x) {
    return constrained_ei(x, cost_model, constraint_models, constraints, best);
  };
  AcquisitionResult result = maximize_on_grid(acquisition, domain, options);
  if (!(result.value > 0.0)) {
    // Degenerate surface: pick the most plausible feasible grid point.
    GridSearchOptions grid_only = options;
    grid_only.refine_starts = 0;
    const auto fallback = maximize_on_grid(
        [&](const Eigen::VectorXd& x) { return feasibility_product(x, constraint_models, constraints); }, domain,
        grid_only);
    result.argmax = fallback.argmax;
    result.value = 0.0;
  }
  result.feasibility_probabilities = feasibility_probabilities(result.argmax, constraint_models, constraints);
  return result;
}

}  // namespace grindopt
