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

#include "grindopt/session.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "grindopt/errors.hpp"
#include "grindopt/random.hpp"

namespace grindopt {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;   // "init"
constexpr std::uint64_t kHyperStream = 0x68797072;  // "hypr"

const std::string_view kQuantities[] = {kCost, kTemperature, kRoughness};

double observable(const TrialRecord& trial, std::string_view quantity) {
  if (quantity == kCost) {
    return trial.cost_u;
  }
  if (auto v = constraint_observable(trial, quantity)) {
    return *v;
  }
  throw ContractViolation("unknown quantity '" + std::string(quantity) + "'");
}

constexpr std::size_t kDim = 2;

gp::Hyperparams fallback_hyperparams(std::size_t dim) { return {1.0, std::vector<double>(dim, 0.5), 0.1}; }

ProcessParams random_point(const Domain& domain, Rng& rng) {
  const double v = rng.uniform(domain.lower(0), domain.upper(0));
  const double f = rng.uniform(domain.lower(1), domain.upper(1));
  return {v, f};
}

}  // namespace

void SessionConfig::validate() const {
  std::vector<FieldError> errors;
  auto collect = [&](auto&& check) {
    try {
      check();
    } catch (const ValidationError& e) {
      errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    } catch (const ContractViolation& e) {
      errors.push_back({"hyperparameters", e.what()});
    }
  };
  collect([&] { domain.validate(); });
  if (domain.dim() != 2) {
    errors.push_back({"domain", "must have exactly two dimensions (cutting speed, feed rate)"});
  }
  collect([&] { temperature.validate(); });
  collect([&] { roughness.validate(); });
  collect([&] { cost.validate(); });
  collect([&] { hyper_bounds.validate(); });
  if (!(epsilon_u > 0.0) || !std::isfinite(epsilon_u)) {
    errors.push_back({"epsilon_U", "must be strictly positive"});
  }
  if (initial_trials < 2) {
    errors.push_back({"initial_trials", "must be at least 2"});
  }
  if (trial_cap < initial_trials) {
    errors.push_back({"trial_cap", "must be at least the number of initial trials"});
  }
  if (convergence.window < 1) {
    errors.push_back({"convergence.window", "must be at least 1"});
  }
  if (!(convergence.feed_span_mmpm >= 0.0) || !(convergence.speed_span_mps >= 0.0)) {
    errors.push_back({"convergence", "span limits must be non-negative"});
  }
  if (hyper_restarts < 1) {
    errors.push_back({"hyperparameters.restarts", "must be at least 1"});
  }
  if (grid.grid_n < 2 || grid.refine_starts < 0 || grid.refine_max_evaluations < 0 || !(grid.refine_tolerance > 0.0)) {
    errors.push_back({"grid", "needs grid_n >= 2, non-negative refinement counts and a positive tolerance"});
  }
  if (!errors.empty()) {
    throw ValidationError(std::move(errors));
  }
}

ConvergenceStatus evaluate_convergence(std::span<const RecommendationRecord> history, double epsilon_u,
                                       const ConvergenceRules& rules) {
  ConvergenceStatus status;
  if (history.empty()) {
    return status;
  }
  status.trial_count = history.back().trial_count;
  if (const auto& last = history.back().recommendation) {
    status.criterion_value_u = last->cost_ci_halfwidth_u;
  }
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (!it->recommendation || !(it->recommendation->cost_ci_halfwidth_u < epsilon_u)) {
      break;
    }
    ++status.consecutive_hits;
  }

  const auto window = static_cast<std::size_t>(rules.window);
  if (history.size() >= window) {
    const auto recent = history.last(window);
    if (std::all_of(recent.begin(), recent.end(), [](const auto& r) { return r.recommendation.has_value(); })) {
      auto span_of = [&](auto member) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& r : recent) {
          const double v = std::invoke(member, r.recommendation->params);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        return hi - lo;
      };
      status.recent_feed_span_mmpm = span_of(&ProcessParams::feed_rate_mmpm);
      status.recent_speed_span_mps = span_of(&ProcessParams::cutting_speed_mps);
    }
  }

  status.converged = status.consecutive_hits >= rules.window && status.recent_feed_span_mmpm &&
                     *status.recent_feed_span_mmpm <= rules.feed_span_mmpm && status.recent_speed_span_mps &&
                     *status.recent_speed_span_mps <= rules.speed_span_mps;
  return status;
}

TemperatureAggregate aggregate_temperature(std::span<const std::vector<double>> per_sensor_series) {
  constexpr std::size_t kTop = 10;
  if (per_sensor_series.empty()) {
    throw ContractViolation("temperature aggregation needs at least one sensor");
  }
  TemperatureAggregate out;
  double sum = 0.0;
  for (const auto& series : per_sensor_series) {
    if (series.empty()) {
      throw ContractViolation("a temperature sensor reported no readings");
    }
    std::vector<double> sorted = series;
    const std::size_t n = std::min(kTop, sorted.size());
    out.degraded = out.degraded || sorted.size() < kTop;
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n), sorted.end(),
                      std::greater<>());
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      top += sorted[i];
    }
    sum += top / static_cast<double>(n);
  }
  out.value_c = sum / static_cast<double>(per_sensor_series.size());
  return out;
}

Session Session::create(SessionConfig config) {
  config.validate();
  SessionState state;
  state.config = std::move(config);
  Rng rng(derive_seed(state.config.seed, {kInitStream}));
  for (int i = 0; i < state.config.initial_trials; ++i) {
    state.pending.push_back({random_point(state.config.domain, rng), TrialOrigin::kRandomInit});
  }
  return Session(std::move(state));
}

Session Session::restore(SessionState state) {
  state.config.validate();
  for (std::size_t i = 0; i < state.trials.size(); ++i) {
    if (state.trials[i].index != i) {
      throw ValidationError("trials", "trial indices must be dense and ordered");
    }
  }
  Session session(std::move(state));
  if (session.state_.models_current) {
    if (session.state_.trials.size() < 2 || session.state_.hyperparameters.size() != std::size(kQuantities)) {
      throw ValidationError("hyperparameters", "fitted models need two trials and three hyperparameter sets");
    }
    session.fit_with(session.state_.hyperparameters);
  }
  return session;
}

bool Session::converged() const noexcept { return !state_.convergence.empty() && state_.convergence.back().converged; }

bool Session::at_cap() const noexcept {
  return state_.trials.size() >= static_cast<std::size_t>(state_.config.trial_cap);
}

std::optional<ProcessParams> Session::next_proposal() const {
  if (state_.pending.empty() || converged() || at_cap()) {
    return std::nullopt;
  }
  return state_.pending.front().params;
}

const TrialRecord& Session::record_trial(const ProcessParams& params, const TrialOutcome& outcome,
                                         std::optional<TrialOrigin> origin) {
  if (converged()) {
    throw ConflictError("session has converged");
  }
  if (at_cap()) {
    throw ConflictError("session reached its trial cap");
  }
  std::vector<FieldError> errors;
  if (!std::isfinite(params.cutting_speed_mps)) {
    errors.push_back({"cutting_speed_mps", "must be finite"});
  }
  if (!std::isfinite(params.feed_rate_mmpm) || !(params.feed_rate_mmpm > 0.0)) {
    errors.push_back({"feed_rate_mmpm", "must be finite and strictly positive"});
  }
  try {
    outcome.validate();
  } catch (const ValidationError& e) {
    errors.insert(errors.end(), e.errors().begin(), e.errors().end());
  }
  if (!errors.empty()) {
    throw ValidationError(std::move(errors));
  }

  const auto pending = std::find_if(state_.pending.begin(), state_.pending.end(),
                                    [&](const Proposal& p) { return p.params == params; });
  TrialOrigin resolved = TrialOrigin::kManual;
  if (origin) {
    resolved = *origin;
  } else if (pending != state_.pending.end()) {
    resolved = pending->origin;
  }

  const bool inside = state_.config.domain.contains(params);
  if (!inside && resolved != TrialOrigin::kManual) {
    throw ValidationError("params", "parameters outside the domain are only accepted as manual trials");
  }
  if (pending != state_.pending.end()) {
    state_.pending.erase(pending);
  }

  TrialRecord record;
  record.index = state_.trials.size();
  record.params = params;
  record.outcome = outcome;
  record.cost_u = cost_per_insert(params.cutting_speed_mps, params.feed_rate_mmpm,
                                  removed_volume(outcome.dressing_interval_inserts, state_.config.cost),
                                  state_.config.cost);
  record.origin = resolved;
  record.out_of_domain = !inside;
  state_.trials.push_back(record);

  state_.models_current = false;
  cost_model_.reset();
  models_.reset();
  return state_.trials.back();
}

gp::TrainingSet Session::training_for(std::string_view quantity, gp::OutputNormalizer& normalizer) const {
  const auto t = static_cast<Eigen::Index>(state_.trials.size());
  Eigen::MatrixXd x(t, 2);
  Eigen::VectorXd y(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    const auto& trial = state_.trials[static_cast<std::size_t>(i)];
    x.row(i) = state_.config.domain.to_unit(trial.params.to_vector()).transpose();
    y(i) = observable(trial, quantity);
  }
  normalizer = gp::OutputNormalizer::standardizing(y);
  return {std::move(x), normalizer.normalize(y)};
}

void Session::fit_with(const std::map<std::string, gp::Hyperparams, std::less<>>& hyper) {
  const gp::InputNormalizer inputs(state_.config.domain.lower, state_.config.domain.upper);
  ModelMap fitted;
  std::optional<gp::GpModel> cost;
  for (auto quantity : kQuantities) {
    gp::OutputNormalizer normalizer;
    auto training = training_for(quantity, normalizer);
    auto model = gp::GpModel::fit(std::move(training), hyper.at(std::string(quantity)), inputs, normalizer);
    if (quantity == kCost) {
      cost.emplace(std::move(model));
    } else {
      fitted.emplace(std::string(quantity), std::move(model));
    }
  }
  cost_model_ = std::move(cost);
  models_ = std::move(fitted);
}

void Session::refit_models() {
  if (state_.trials.size() < 2) {
    throw ContractViolation("refitting needs at least two trials");
  }
  std::map<std::string, gp::Hyperparams, std::less<>> hyper;
  bool fallback = false;
  for (std::size_t q = 0; q < std::size(kQuantities); ++q) {
    const std::string name(kQuantities[q]);
    gp::OutputNormalizer normalizer;
    const auto training = training_for(name, normalizer);
    const auto seed = derive_seed(state_.config.seed, {kHyperStream, state_.trials.size(), q});
    // Fewer points than D + 1 cannot separate signal from noise; the
    // likelihood optimum then puts all variance into noise.
    if (static_cast<std::size_t>(training.size()) <= kDim) {
      hyper[name] = fallback_hyperparams(kDim);
      continue;
    }
    try {
      hyper[name] =
          gp::optimize_hyperparameters(training, state_.config.hyper_bounds, state_.config.hyper_restarts, seed).hyper;
    } catch (const NumericalError&) {
      fallback = true;
      const auto previous = state_.hyperparameters.find(name);
      hyper[name] = previous != state_.hyperparameters.end() ? previous->second : fallback_hyperparams(kDim);
    }
  }
  fit_with(hyper);
  state_.hyperparameters = std::move(hyper);
  state_.hyperparameter_fallback = fallback;
  state_.models_current = true;
}

const gp::GpModel& Session::model(std::string_view quantity) const {
  if (!has_models()) {
    throw ConflictError("models are not fitted");
  }
  if (quantity == kCost) {
    return *cost_model_;
  }
  const auto it = models_->find(quantity);
  if (it == models_->end()) {
    throw ValidationError("quantity", "must be one of cost, temperature, roughness");
  }
  return it->second;
}

gp::PosteriorPrediction Session::predict(std::string_view quantity, const ProcessParams& params) const {
  return model(quantity).predict(params.to_vector());
}

std::vector<SurfacePoint> Session::surface(std::string_view quantity, int grid_n) const {
  const auto& m = model(quantity);
  std::vector<SurfacePoint> out;
  for (const auto& x : grid_points(state_.config.domain, grid_n)) {
    out.push_back({ProcessParams::from_vector(x), m.predict(x)});
  }
  return out;
}

std::vector<std::optional<Recommendation>> Session::recommend_ladder(
    std::span<const std::pair<double, double>> thresholds) const {
  if (!has_models()) {
    throw ConflictError("models are not fitted");
  }
  const auto constraints = state_.config.constraints();
  const auto& cost = *cost_model_;
  const auto& domain = state_.config.domain;

  auto feasible = [&](const Eigen::VectorXd& x, double p_t, double p_ra) {
    const auto probs = feasibility_probabilities(x, *models_, constraints);
    return probs.at(std::string(kTemperature)) >= p_t && probs.at(std::string(kRoughness)) >= p_ra;
  };

  struct Candidate {
    Eigen::VectorXd x;
    double mean;
  };
  std::vector<std::optional<Candidate>> own(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const auto [p_t, p_ra] = thresholds[i];
    if (!(p_t > 0.0 && p_t < 1.0) || !(p_ra > 0.0 && p_ra < 1.0)) {
      throw ValidationError("p_min", "feasibility thresholds must lie strictly between 0 and 1");
    }
    const auto best = maximize_on_grid(
        [&](const Eigen::VectorXd& x) {
          return feasible(x, p_t, p_ra) ? -cost.predict(x).mean : -std::numeric_limits<double>::infinity();
        },
        domain, state_.config.grid);
    if (std::isfinite(best.value)) {
      own[i] = Candidate{best.argmax, -best.value};
    }
  }

  std::vector<std::optional<Recommendation>> out(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    std::optional<Candidate> chosen;
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      const bool stricter = thresholds[j].first >= thresholds[i].first && thresholds[j].second >= thresholds[i].second;
      if (!own[j] || !(i == j || stricter)) {
        continue;
      }
      const auto& c = *own[j];
      if (!chosen || c.mean < chosen->mean || (c.mean == chosen->mean && tie_break_less(c.x, chosen->x))) {
        chosen = c;
      }
    }
    if (!chosen) {
      continue;
    }
    const auto p = cost.predict(chosen->x);
    Recommendation rec;
    rec.params = ProcessParams::from_vector(chosen->x);
    rec.expected_cost_u = p.mean;
    rec.cost_ci_halfwidth_u = 2.0 * std::sqrt(p.variance);
    rec.feasibility = feasibility_probabilities(chosen->x, *models_, constraints);
    out[i] = std::move(rec);
  }
  return out;
}

std::optional<Recommendation> Session::recommend_optimum(double p_min_temperature, double p_min_roughness) const {
  const std::pair<double, double> one[] = {{p_min_temperature, p_min_roughness}};
  return recommend_ladder(one).front();
}

ProcessParams Session::propose_next_trial() {
  if (!has_models()) {
    throw ConflictError("models are not fitted");
  }
  if (converged()) {
    throw ConflictError("session has converged");
  }
  const auto constraints = state_.config.constraints();
  const auto best = feasible_best(state_.trials, constraints);
  const auto result =
      maximize_acquisition(*cost_model_, *models_, constraints, best, state_.config.domain, state_.config.grid);
  const auto params = ProcessParams::from_vector(result.argmax);
  std::erase_if(state_.pending, [](const Proposal& p) { return p.origin == TrialOrigin::kAcquisition; });
  state_.pending.push_back({params, TrialOrigin::kAcquisition});
  return params;
}

ConvergenceStatus Session::check_convergence() const {
  return evaluate_convergence(state_.recommendations, state_.config.epsilon_u, state_.config.convergence);
}

StepReport Session::advance() {
  StepReport report;
  if (state_.trials.size() >= 2) {
    refit_models();
    const double p_t = state_.config.temperature.p_min;
    const double p_ra = state_.config.roughness.p_min;
    report.recommendation = recommend_optimum(p_t, p_ra);
    state_.recommendations.push_back({state_.trials.size(), p_t, p_ra, report.recommendation});
    report.convergence = check_convergence();
    state_.convergence.push_back(report.convergence);
  } else {
    report.convergence.trial_count = state_.trials.size();
  }

  if (state_.trials.size() >= static_cast<std::size_t>(state_.config.initial_trials)) {
    std::erase_if(state_.pending, [](const Proposal& p) { return p.origin == TrialOrigin::kRandomInit; });
  }
  if (!converged() && !at_cap()) {
    const bool init_pending = std::any_of(state_.pending.begin(), state_.pending.end(),
                                          [](const Proposal& p) { return p.origin == TrialOrigin::kRandomInit; });
    if (!init_pending) {
      if (has_models()) {
        propose_next_trial();
      } else if (state_.pending.empty()) {
        Rng rng(derive_seed(state_.config.seed, {kInitStream, state_.trials.size()}));
        state_.pending.push_back({random_point(state_.config.domain, rng), TrialOrigin::kRandomInit});
      }
    }
  }
  report.next_proposal = next_proposal();
  return report;
}

Session replay(const SessionConfig& config, std::span<const TrialRecord> trials) {
  Session session = Session::create(config);
  for (const auto& trial : trials) {
    session.record_trial(trial.params, trial.outcome, trial.origin);
    session.advance();
  }
  return session;
}

}  // namespace grindopt
