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
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "grindopt/acquisition.hpp"
#include "grindopt/errors.hpp"
#include "oracles.hpp"

using namespace grindopt;

namespace {

Domain unit_box(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

// Constant-mean model whose predictions sit at `level` with negligible spread.
gp::GpModel flat_model(int dim, double level) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(1, dim, 0.5);
  return gp::GpModel::fit(gp::TrainingSet(x, Eigen::VectorXd::Zero(1)),
                          gp::Hyperparams{1e-4, std::vector<double>(static_cast<std::size_t>(dim), 1.0), 1e-6}, {},
                          gp::OutputNormalizer(level, 1.0));
}

TrialRecord trial(double cost, double temperature, double roughness) {
  TrialRecord t;
  t.cost_u = cost;
  t.outcome.first_side_temperature_c = temperature;
  t.outcome.max_roughness_nm = roughness;
  t.outcome.dressing_interval_inserts = 1.0;
  return t;
}

const std::vector<ConstraintSpec> kLimits{{std::string(kTemperature), 585.0, 0.5}, {std::string(kRoughness), 230.0, 0.5}};

// Cost model of the noisy quadratic curve and a falling 1-D constraint with
// limit 250 that rules out the low end of the axis.
struct CurveProblem {
  gp::GpModel cost;
  ModelMap constraints;
  std::vector<ConstraintSpec> specs{{"load", 250.0, 0.5}};
  double best;
};

CurveProblem curve_problem() {
  const auto f = fixtures::noisy_curve(1);
  const auto out = gp::OutputNormalizer::standardizing(f.y);
  const gp::TrainingSet training(f.x, out.normalize(f.y));
  const auto fit = gp::optimize_hyperparameters(training, gp::HyperparamBounds{}, 8, 1);
  auto cost = gp::GpModel::fit(training, fit.hyper, {}, out);

  Eigen::VectorXd load(f.x.rows());
  for (Eigen::Index i = 0; i < f.x.rows(); ++i) {
    load(i) = 400.0 - 300.0 * f.x(i, 0);
  }
  const auto load_out = gp::OutputNormalizer::standardizing(load);
  auto load_model = gp::GpModel::fit(gp::TrainingSet(f.x, load_out.normalize(load)), gp::Hyperparams{1.0, {1.0}, 1e-3},
                                     {}, load_out);
  ModelMap constraints;
  constraints.emplace("load", std::move(load_model));
  return {std::move(cost), std::move(constraints), {{"load", 250.0, 0.5}}, f.y.minCoeff()};
}

}  // namespace

TEST_SUITE("acquisition") {
  TEST_CASE("expected improvement reference values") {
    CHECK(expected_improvement(2.0, 1.0, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(expected_improvement(2.0, 1.0, 2.0) == doctest::Approx(0.39894).epsilon(1e-5));
    CHECK(expected_improvement(1.5, 0.0, 2.0) == doctest::Approx(0.5));
    CHECK(expected_improvement(2.5, 0.0, 2.0) == 0.0);
    CHECK(expected_improvement(2.5, 1e-30, 2.0) == 0.0);
    CHECK(expected_improvement(3.0, 1.0, 2.0) == doctest::Approx(0.08332).epsilon(1e-4));
  }

  TEST_CASE("expected improvement agrees with Monte-Carlo") {
    const auto mc = oracle::expected_improvement(3.0, 1.0, 2.0, 1'000'000, 7);
    CHECK(std::abs(expected_improvement(3.0, 1.0, 2.0) - mc.estimate) <= 3.0 * mc.standard_error);
  }

  TEST_CASE("expected improvement is non-negative and grows with sigma above the incumbent") {
    for (double mean = -3.0; mean <= 3.0; mean += 0.25) {
      double previous = 0.0;
      for (double sd = 0.0; sd <= 5.0; sd += 0.05) {
        const double ei = expected_improvement(mean, sd * sd, 0.0);
        CHECK(ei >= 0.0);
        if (mean >= 0.0) {
          CHECK(ei >= previous - 1e-15);
        }
        previous = ei;
      }
    }
  }

  TEST_CASE("standard normal table") {
    CHECK(standard_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(standard_normal_cdf(1.0) - 0.84134) < 1e-5);
    CHECK(std::abs(standard_normal_cdf(2.0) - 0.97725) < 1e-5);
    CHECK(std::abs(standard_normal_cdf(-1.0) - (1 - 0.84134)) < 1e-5);
  }

  TEST_CASE("probability of feasibility reference values") {
    CHECK(probability_feasible(10.0, 4.0, 10.0) == doctest::Approx(0.5));
    CHECK(std::abs(probability_feasible(8.0, 4.0, 10.0) - 0.84134) < 1e-5);
    CHECK(probability_feasible(9.0, 0.0, 10.0) == 1.0);
    CHECK(probability_feasible(11.0, 0.0, 10.0) == 0.0);
  }

  TEST_CASE("probability of feasibility is bounded and monotone") {
    for (double sd = 0.1; sd <= 5.0; sd += 0.1) {
      double previous = 1.0;
      for (double mean = -10.0; mean <= 10.0; mean += 0.1) {
        const double p = probability_feasible(mean, sd * sd, 0.0);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p <= previous + 1e-15);
        previous = p;
      }
    }
    for (double mean : {-2.0, 2.0}) {
      double previous_gap = 1.0;
      for (double sd = 0.1; sd <= 20.0; sd += 0.1) {
        const double gap = std::abs(probability_feasible(mean, sd * sd, 0.0) - 0.5);
        CHECK(gap <= previous_gap + 1e-15);
        previous_gap = gap;
      }
    }
  }

  TEST_CASE("feasible best filters before taking the minimum") {
    CHECK_FALSE(feasible_best({}, kLimits).has_value());
    const std::vector<TrialRecord> mixed{trial(1.2, 600.0, 200.0), trial(0.9, 500.0, 200.0), trial(0.8, 500.0, 240.0)};
    REQUIRE(feasible_best(mixed, kLimits).has_value());
    CHECK(*feasible_best(mixed, kLimits) == 0.9);
    const std::vector<TrialRecord> none{trial(1.2, 600.0, 200.0), trial(0.8, 500.0, 240.0)};
    CHECK_FALSE(feasible_best(none, kLimits).has_value());
  }

  TEST_CASE("constrained EI is bounded by EI and reduces to it when feasible") {
    const auto problem = curve_problem();
    ModelMap sure;
    sure.emplace("load", flat_model(1, -1e6));
    ModelMap impossible;
    impossible.emplace("load", flat_model(1, 1e6));
    for (int i = 0; i <= 100; ++i) {
      const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, i / 100.0);
      const auto p = problem.cost.predict(x);
      const double ei = expected_improvement(p.mean, p.variance, problem.best);
      CHECK(constrained_ei(x, problem.cost, problem.constraints, problem.specs, problem.best) <= ei + 1e-15);
      CHECK(constrained_ei(x, problem.cost, sure, problem.specs, problem.best) == doctest::Approx(ei).epsilon(1e-14));
      CHECK(constrained_ei(x, problem.cost, impossible, problem.specs, problem.best) == 0.0);
    }
  }

  TEST_CASE("constrained EI without an incumbent is the feasibility product") {
    const auto problem = curve_problem();
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.7);
    const auto p = problem.constraints.at("load").predict(x);
    CHECK(constrained_ei(x, problem.cost, problem.constraints, problem.specs, std::nullopt) ==
          doctest::Approx(probability_feasible(p.mean, p.variance, 250.0)));
  }

  TEST_CASE("a falling constraint pushes the acquisition argmax up the axis") {
    const auto problem = curve_problem();
    ModelMap unconstrained;
    unconstrained.emplace("load", flat_model(1, -1e6));
    const auto free_run =
        maximize_acquisition(problem.cost, unconstrained, problem.specs, problem.best, unit_box(1));
    const auto constrained =
        maximize_acquisition(problem.cost, problem.constraints, problem.specs, problem.best, unit_box(1));
    CHECK(free_run.argmax(0) < 0.4);
    CHECK(constrained.argmax(0) > free_run.argmax(0));
    const auto& load = problem.constraints.at("load");
    const auto at = [&](const Eigen::VectorXd& x) {
      const auto p = load.predict(x);
      return probability_feasible(p.mean, p.variance, 250.0);
    };
    CHECK(at(constrained.argmax) > at(free_run.argmax));
  }

  TEST_CASE("impossible constraints fall back to the lowest corner") {
    const auto cost = flat_model(2, 1.0);
    ModelMap models;
    models.emplace(std::string(kTemperature), flat_model(2, 1e6));
    models.emplace(std::string(kRoughness), flat_model(2, 1e6));
    const Domain domain = Domain::grinding_default();
    for (std::optional<double> best : {std::optional<double>(), std::optional<double>(0.5)}) {
      const auto result = maximize_acquisition(cost, models, kLimits, best, domain);
      CHECK(result.value == 0.0);
      CHECK(result.argmax(0) == domain.lower(0));
      CHECK(result.argmax(1) == domain.lower(1));
    }
  }

  TEST_CASE("tie break prefers lower feed, then lower speed") {
    CHECK(tie_break_less(Eigen::Vector2d(30, 10), Eigen::Vector2d(12, 11)));
    CHECK(tie_break_less(Eigen::Vector2d(12, 10), Eigen::Vector2d(13, 10)));
    CHECK_FALSE(tie_break_less(Eigen::Vector2d(12, 10), Eigen::Vector2d(12, 10)));
  }

  TEST_CASE("grid covers the domain with the first axis slowest") {
    const auto grid = grid_points(Domain::grinding_default(), 3);
    REQUIRE(grid.size() == 9);
    CHECK(grid[0] == Eigen::Vector2d(12, 10));
    CHECK(grid[1] == Eigen::Vector2d(12, 25));
    CHECK(grid[3] == Eigen::Vector2d(21, 10));
    CHECK(grid[8] == Eigen::Vector2d(30, 40));
  }

  // Noiseless samples of a bowl on a 3x3 lattice; the EI peak is interior.
  struct BowlProblem {
    gp::GpModel cost;
    ModelMap constraints;
    double best;
  };

  BowlProblem bowl_problem() {
    Eigen::MatrixXd x(9, 2);
    Eigen::VectorXd y(9);
    const double levels[] = {0.1, 0.5, 0.9};
    int k = 0;
    for (double a : levels) {
      for (double b : levels) {
        x(k, 0) = a;
        x(k, 1) = b;
        y(k) = std::pow(a - 0.4, 2) + std::pow(b - 0.6, 2);
        ++k;
      }
    }
    const auto out = gp::OutputNormalizer::standardizing(y);
    auto cost = gp::GpModel::fit(gp::TrainingSet(x, out.normalize(y)), gp::Hyperparams{1.0, {0.5, 0.5}, 1e-6}, {}, out);
    ModelMap constraints;
    constraints.emplace(std::string(kTemperature), flat_model(2, -1e6));
    constraints.emplace(std::string(kRoughness), flat_model(2, -1e6));
    return {std::move(cost), std::move(constraints), y.minCoeff()};
  }

  TEST_CASE("refined argmax matches a dense grid oracle") {
    const auto problem = bowl_problem();
    const auto result = maximize_acquisition(problem.cost, problem.constraints, kLimits, problem.best, unit_box(2));
    const auto oracle_argmax = oracle::grid_argmax(
        [&](const Eigen::Vector2d& x) {
          const auto p = problem.cost.predict(x);
          return expected_improvement(p.mean, p.variance, problem.best);
        },
        Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), 1001);
    CHECK((result.argmax - oracle_argmax).cwiseAbs().maxCoeff() <= 1e-2);
  }

  TEST_CASE("acquisition result dominates its grid and is deterministic") {
    const auto problem = bowl_problem();
    const Domain domain = unit_box(2);
    const auto a = maximize_acquisition(problem.cost, problem.constraints, kLimits, problem.best, domain);
    const auto b = maximize_acquisition(problem.cost, problem.constraints, kLimits, problem.best, domain);
    CHECK(a.argmax == b.argmax);
    CHECK(a.value == b.value);
    CHECK(a.feasibility_probabilities == b.feasibility_probabilities);
    CHECK(domain.contains(a.argmax));
    for (const auto& x : grid_points(domain, 101)) {
      CHECK(a.value >= constrained_ei(x, problem.cost, problem.constraints, kLimits, problem.best));
    }
  }

  TEST_CASE("missing constraint model is a contract violation") {
    const auto problem = bowl_problem();
    CHECK_THROWS_AS(constrained_ei(Eigen::Vector2d(0.5, 0.5), problem.cost, {}, kLimits, problem.best),
                    ContractViolation);
  }
}
