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

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code.

#ifndef GRINDOPT_TESTS_ORACLES_HPP
#define GRINDOPT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

template <typename Real = double>
Real matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sf2, const std::vector<double>& length_scales) {
  Real r2 = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Real d = (static_cast<Real>(a(i)) - b(i)) / length_scales[static_cast<std::size_t>(i)];
    r2 += d * d;
  }
  const Real s5r = std::sqrt(5 * r2);
  return sf2 * (1 + s5r + 5 * r2 / 3) * std::exp(-s5r);
}

struct Dense {
  double mean = 0.0;
  double variance = 0.0;
  double log_marginal_likelihood = 0.0;
};

/// Posterior and LML through an explicit inverse and LU determinant of
/// K + sn2 I, in extended precision so the reference is not limited by the
/// cancellation in sf2 - k' A^-1 k.
inline Dense dense_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double sf2,
                             const std::vector<double>& ls, double sn2, const Eigen::VectorXd& query) {
  using Real = long double;
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const Eigen::Index t = x.rows();
  Matrix a(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < t; ++j) {
      a(i, j) = matern52<Real>(x.row(i).transpose(), x.row(j).transpose(), sf2, ls) + (i == j ? sn2 : 0.0);
    }
  }
  const Eigen::FullPivLU<Matrix> lu(a);
  const Matrix inv = lu.inverse();
  Vector k(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    k(i) = matern52<Real>(query, x.row(i).transpose(), sf2, ls);
  }
  const Vector yl = y.cast<Real>();
  Dense out;
  out.mean = static_cast<double>(k.dot(inv * yl));
  out.variance = static_cast<double>(matern52<Real>(query, query, sf2, ls) - k.dot(inv * k));
  out.log_marginal_likelihood =
      static_cast<double>(-yl.dot(inv * yl) / 2 - std::log(std::abs(lu.determinant())) / 2 -
                          static_cast<Real>(t) * std::log(2 * std::numbers::pi_v<Real>) / 2);
  return out;
}

struct MonteCarlo {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// E[max(best - Y, 0)] for Y ~ N(mean, sd^2) by sampling.
inline MonteCarlo expected_improvement(double mean, double sd, double best, int draws, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(mean, sd);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double gain = std::max(best - normal(engine), 0.0);
    sum += gain;
    sum_sq += gain * gain;
  }
  const double n = draws;
  const double m = sum / n;
  const double var = std::max(0.0, sum_sq / n - m * m);
  return {m, std::sqrt(var / (n - 1.0))};
}

/// Brute-force argmax over an n-by-n grid of [lo, hi]^2, ties to the first
/// point found (first axis slowest).
inline Eigen::Vector2d grid_argmax(const std::function<double(const Eigen::Vector2d&)>& f, const Eigen::Vector2d& lo,
                                   const Eigen::Vector2d& hi, int n) {
  Eigen::Vector2d best = lo;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d p(lo(0) + (hi(0) - lo(0)) * i / (n - 1), lo(1) + (hi(1) - lo(1)) * j / (n - 1));
      const double v = f(p);
      if (v > best_value) {
        best_value = v;
        best = p;
      }
    }
  }
  return best;
}

inline bool relative_close(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * std::max(scale, 1e-12);
}

}  // namespace oracle

#endif  // GRINDOPT_TESTS_ORACLES_HPP
