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

#include "grindopt/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace grindopt {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

SimplexResult minimize_simplex(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const Eigen::VectorXd& start, const SimplexOptions& options) {
  const auto n = static_cast<std::size_t>(start.size());
  int evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> vertices(n + 1, start);
  std::vector<double> values(n + 1);
  values[0] = eval(start);
  for (std::size_t i = 0; i < n; ++i) {
    vertices[i + 1](static_cast<Eigen::Index>(i)) += options.initial_step;
    values[i + 1] = eval(vertices[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    // Stable on index so equal values keep the earlier vertex first.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> v2;
    std::vector<double> f2;
    v2.reserve(n + 1);
    f2.reserve(n + 1);
    for (auto i : order) {
      v2.push_back(vertices[i]);
      f2.push_back(values[i]);
    }
    vertices = std::move(v2);
    values = std::move(f2);
  };

  sort_vertices();
  while (evaluations < options.max_evaluations) {
    double x_spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      x_spread = std::max(x_spread, (vertices[i] - vertices[0]).cwiseAbs().maxCoeff());
    }
    const double f_spread = values[n] - values[0];
    if (x_spread <= options.x_tolerance && (f_spread <= options.f_tolerance || !std::isfinite(f_spread))) {
      break;
    }
    if (x_spread <= options.x_tolerance * 1e-3) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      centroid += vertices[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd& worst = vertices[n];
    Eigen::VectorXd reflected = centroid + kReflect * (centroid - worst);
    const double f_reflected = eval(reflected);

    if (f_reflected < values[0]) {
      Eigen::VectorXd expanded = centroid + kExpand * (reflected - centroid);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertices[n] = std::move(expanded);
        values[n] = f_expanded;
      } else {
        vertices[n] = std::move(reflected);
        values[n] = f_reflected;
      }
    } else if (f_reflected < values[n - 1]) {
      vertices[n] = std::move(reflected);
      values[n] = f_reflected;
    } else {
      const bool outside = f_reflected < values[n];
      Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + kContract * (reflected - centroid))
                                           : Eigen::VectorXd(centroid + kContract * (worst - centroid));
      const double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, values[n])) {
        vertices[n] = std::move(contracted);
        values[n] = f_contracted;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          vertices[i] = vertices[0] + kShrink * (vertices[i] - vertices[0]);
          values[i] = eval(vertices[i]);
        }
      }
    }
    sort_vertices();
  }

  return {vertices[0], values[0], evaluations};
}

}  // namespace grindopt
