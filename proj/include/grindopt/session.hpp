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

#ifndef GRINDOPT_SESSION_HPP
#define GRINDOPT_SESSION_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grindopt/acquisition.hpp"
#include "grindopt/cost_model.hpp"
#include "grindopt/gp.hpp"
#include "grindopt/trial.hpp"
#include "grindopt/types.hpp"

namespace grindopt {

inline constexpr std::string_view kCost = "cost";

/// Robustness rules on top of 2 sigma(x_opt) < epsilon: the criterion must hold
/// on `window` consecutive recommendations whose feed rates and cutting speeds
/// span no more than the given widths.
struct ConvergenceRules {
  int window = 3;
  double feed_span_mmpm = 0.4;
  double speed_span_mps = 0.2;

  bool operator==(const ConvergenceRules&) const = default;
};

struct SessionConfig {
  Domain domain = Domain::grinding_default();
  ConstraintSpec temperature{std::string(kTemperature), 585.0, 0.5};
  ConstraintSpec roughness{std::string(kRoughness), 230.0, 0.5};
  CostParams cost;
  double epsilon_u = 0.04;
  std::uint64_t seed = 1;
  int trial_cap = 30;
  int initial_trials = 2;
  ConvergenceRules convergence;
  gp::HyperparamBounds hyper_bounds;
  int hyper_restarts = 8;
  GridSearchOptions grid;

  /// Throws ValidationError listing every invalid field.
  void validate() const;
  std::vector<ConstraintSpec> constraints() const { return {temperature, roughness}; }

  bool operator==(const SessionConfig&) const = default;
};

struct Proposal {
  ProcessParams params;
  TrialOrigin origin = TrialOrigin::kAcquisition;

  bool operator==(const Proposal&) const = default;
};

/// Cost-minimal point of the posterior mean among points meeting both
/// feasibility thresholds.
struct Recommendation {
  ProcessParams params;
  double expected_cost_u = 0.0;
  /// 2 sigma of the cost posterior at params.
  double cost_ci_halfwidth_u = 0.0;
  ProbabilityMap feasibility;

  bool operator==(const Recommendation&) const = default;
};

struct RecommendationRecord {
  std::size_t trial_count = 0;
  double p_min_temperature = 0.5;
  double p_min_roughness = 0.5;
  std::optional<Recommendation> recommendation;

  bool operator==(const RecommendationRecord&) const = default;
};

struct ConvergenceStatus {
  std::size_t trial_count = 0;
  bool converged = false;
  /// 2 sigma of the cost at the latest recommendation; absent without one.
  std::optional<double> criterion_value_u;
  int consecutive_hits = 0;
  /// Spans over the last `window` recommendations; absent until there are
  /// that many.
  std::optional<double> recent_feed_span_mmpm;
  std::optional<double> recent_speed_span_mps;

  bool operator==(const ConvergenceStatus&) const = default;
};

/// Everything needed to reconstruct a session exactly; models are rebuilt
/// from the stored hyperparameters.
struct SessionState {
  SessionConfig config;
  std::vector<TrialRecord> trials;
  std::vector<Proposal> pending;
  std::vector<RecommendationRecord> recommendations;
  std::vector<ConvergenceStatus> convergence;
  /// Hyperparameters of the last fit, keyed by quantity (cost, temperature,
  /// roughness).
  std::map<std::string, gp::Hyperparams, std::less<>> hyperparameters;
  bool models_current = false;
  /// The last refit could not optimize some hyperparameters and reused the
  /// previous ones.
  bool hyperparameter_fallback = false;

  bool operator==(const SessionState&) const = default;
};

/// Pure evaluation of the convergence rules over a recommendation history.
ConvergenceStatus evaluate_convergence(std::span<const RecommendationRecord> history, double epsilon_u,
                                       const ConvergenceRules& rules);

struct TemperatureAggregate {
  double value_c = 0.0;
  /// Some sensor had fewer than ten readings; all of its readings were used.
  bool degraded = false;
};

/// Mean over sensors of the mean of each sensor's ten highest readings.
TemperatureAggregate aggregate_temperature(std::span<const std::vector<double>> per_sensor_series);

struct SurfacePoint {
  ProcessParams params;
  gp::PosteriorPrediction prediction;
};

struct StepReport {
  std::optional<Recommendation> recommendation;
  ConvergenceStatus convergence;
  std::optional<ProcessParams> next_proposal;
};

class Session {
 public:
  /// Validates the configuration and queues the random initial proposals.
  static Session create(SessionConfig config);
  /// Rebuild a session from persisted state without re-optimizing.
  static Session restore(SessionState state);

  const SessionState& state() const noexcept { return state_; }
  const SessionConfig& config() const noexcept { return state_.config; }
  std::span<const TrialRecord> trials() const noexcept { return state_.trials; }
  std::span<const Proposal> pending() const noexcept { return state_.pending; }

  bool converged() const noexcept;
  bool at_cap() const noexcept;
  std::optional<ProcessParams> next_proposal() const;

  /// Append a measured trial and invalidate the models. Without an explicit
  /// origin a trial matching a pending proposal inherits its origin; anything
  /// else is manual. Out-of-domain parameters are accepted only as manual.
  const TrialRecord& record_trial(const ProcessParams& params, const TrialOutcome& outcome,
                                  std::optional<TrialOrigin> origin = std::nullopt);

  /// Fit cost, temperature and roughness models on the current trials with
  /// re-optimized hyperparameters.
  void refit_models();
  bool has_models() const noexcept { return models_.has_value(); }
  const gp::GpModel& model(std::string_view quantity) const;
  gp::PosteriorPrediction predict(std::string_view quantity, const ProcessParams& params) const;
  std::vector<SurfacePoint> surface(std::string_view quantity, int grid_n) const;

  std::optional<Recommendation> recommend_optimum(double p_min_temperature, double p_min_roughness) const;
  /// Recommendations for several threshold pairs. Candidates found for a
  /// stricter pair are also offered to every looser pair, so expected cost is
  /// monotone in the thresholds.
  std::vector<std::optional<Recommendation>> recommend_ladder(
      std::span<const std::pair<double, double>> thresholds) const;

  /// argmax of the constrained EI; replaces any pending acquisition proposal.
  ProcessParams propose_next_trial();
  ConvergenceStatus check_convergence() const;

  /// One loop iteration after a trial: refit, recommend at the configured
  /// thresholds, judge convergence, and queue the next proposal unless
  /// converged or at the trial cap. Unused initial proposals are dropped once
  /// the session holds the configured number of initial trials.
  StepReport advance();

 private:
  explicit Session(SessionState state) : state_(std::move(state)) {}

  gp::TrainingSet training_for(std::string_view quantity, gp::OutputNormalizer& normalizer) const;
  void fit_with(const std::map<std::string, gp::Hyperparams, std::less<>>& hyper);

  SessionState state_;
  std::optional<gp::GpModel> cost_model_;
  std::optional<ModelMap> models_;
};

/// Rebuild a session from a trial log: create with the same configuration,
/// then record and advance for every trial in order.
Session replay(const SessionConfig& config, std::span<const TrialRecord> trials);

}  // namespace grindopt

#endif  // GRINDOPT_SESSION_HPP
