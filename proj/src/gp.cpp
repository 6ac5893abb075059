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

#include "grindopt/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "grindopt/errors.hpp"
#include "grindopt/nelder_mead.hpp"
#include "grindopt/random.hpp"

namespace grindopt::gp {

namespace {

const double kSqrt5 = std::sqrt(5.0);

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void Hyperparams::validate(std::size_t input_dim) const {
  if (length_scales.size() != input_dim) {
    std::ostringstream os;
    os << "hyperparameters carry " << length_scales.size() << " length scales for a " << input_dim
       << "-dimensional input";
    throw ContractViolation(os.str());
  }
  if (!positive_finite(signal_variance) || !positive_finite(noise_variance) ||
      !std::all_of(length_scales.begin(), length_scales.end(), positive_finite)) {
    throw ContractViolation("hyperparameters must be finite and strictly positive");
  }
}

TrainingSet::TrainingSet(Eigen::MatrixXd x, Eigen::VectorXd y) : inputs(std::move(x)), targets(std::move(y)) {
  if (inputs.rows() != targets.size()) {
    throw ContractViolation("training inputs and targets differ in length");
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw ContractViolation("training data must be finite");
  }
}

double kernel(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& x2,
              const Hyperparams& hyper) {
  const auto d = static_cast<Eigen::Index>(hyper.dim());
  if (x.size() != d || x2.size() != d) {
    throw ContractViolation("kernel input dimension does not match the length scales");
  }
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double diff = (x(i) - x2(i)) / hyper.length_scales[static_cast<std::size_t>(i)];
    r2 += diff * diff;
  }
  const double r = std::sqrt(r2);
  return hyper.signal_variance * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r2) * std::exp(-kSqrt5 * r);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& inputs, const Hyperparams& hyper) {
  const Eigen::Index t = inputs.rows();
  Eigen::MatrixXd k(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    k(i, i) = hyper.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = kernel(inputs.row(i).transpose(), inputs.row(j).transpose(), hyper);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

InputNormalizer::InputNormalizer(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw ContractViolation("normalizer bounds must be non-empty and of equal dimension");
  }
  if (!((upper_ - lower_).array() > 0.0).all()) {
    throw ContractViolation("normalizer requires lower < upper in every dimension");
  }
}

Eigen::VectorXd InputNormalizer::to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (is_identity()) {
    return x;
  }
  if (x.size() != lower_.size()) {
    throw ContractViolation("query dimension does not match the input normalizer");
  }
  return ((x - lower_).array() / (upper_ - lower_).array()).matrix();
}

Eigen::VectorXd InputNormalizer::from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  if (is_identity()) {
    return u;
  }
  return (lower_.array() + u.array() * (upper_ - lower_).array()).matrix();
}

OutputNormalizer::OutputNormalizer(double center, double scale) : center_(center), scale_(scale) {
  if (!std::isfinite(center) || !positive_finite(scale)) {
    throw ContractViolation("output normalizer needs a finite center and positive scale");
  }
}

OutputNormalizer OutputNormalizer::standardizing(const Eigen::VectorXd& targets) {
  if (targets.size() == 0) {
    return {};
  }
  const double mean = targets.mean();
  if (targets.size() < 2) {
    return {mean, 1.0};
  }
  const double ss = (targets.array() - mean).square().sum();
  const double sd = std::sqrt(ss / static_cast<double>(targets.size() - 1));
  return {mean, sd > 1e-12 ? sd : 1.0};
}

Eigen::VectorXd OutputNormalizer::normalize(const Eigen::VectorXd& y) const {
  return ((y.array() - center_) / scale_).matrix();
}

std::vector<double> jitter_ladder() {
  std::vector<double> out{0.0};
  for (double j = 1e-10; j <= 1e-4 * (1 + 1e-9); j *= 10.0) {
    out.push_back(j);
  }
  return out;
}

GpModel GpModel::fit(TrainingSet training, Hyperparams hyper, InputNormalizer input_normalizer,
                     OutputNormalizer output_normalizer) {
  if (training.size() > 0 || training.dim() > 0) {
    hyper.validate(static_cast<std::size_t>(training.dim()));
  } else {
    hyper.validate(hyper.dim());
  }
  GpModel model;
  model.training_ = std::move(training);
  model.hyper_ = std::move(hyper);
  model.input_normalizer_ = std::move(input_normalizer);
  model.output_normalizer_ = output_normalizer;

  const Eigen::Index t = model.training_.size();
  if (t == 0) {
    model.alpha_ = Eigen::VectorXd(0);
    return model;
  }

  Eigen::MatrixXd k = kernel_matrix(model.training_.inputs, model.hyper_);
  k.diagonal().array() += model.hyper_.noise_variance;

  std::vector<double> attempted;
  for (double jitter : jitter_ladder()) {
    attempted.push_back(jitter);
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    model.llt_.compute(kj);
    if (model.llt_.info() == Eigen::Success && model.llt_.matrixLLT().diagonal().allFinite()) {
      model.jitter_ = jitter;
      model.alpha_ = model.llt_.solve(model.training_.targets);
      if (model.alpha_.allFinite()) {
        return model;
      }
    }
  }
  throw NumericalError("Cholesky factorization failed after jitter escalation", std::move(attempted));
}

PosteriorPrediction GpModel::predict_normalized(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  if (u.size() != dim()) {
    throw ContractViolation("query dimension does not match the model");
  }
  const Eigen::Index t = training_.size();
  if (t == 0) {
    return {0.0, hyper_.signal_variance};
  }
  Eigen::VectorXd kx(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    kx(i) = kernel(u, training_.inputs.row(i).transpose(), hyper_);
  }
  const double mean = kx.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(kx);
  const double variance = std::max(0.0, hyper_.signal_variance - v.squaredNorm());
  return {mean, variance};
}

PosteriorPrediction GpModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const PosteriorPrediction p = predict_normalized(input_normalizer_.to_unit(x));
  return {output_normalizer_.mean_to_raw(p.mean), output_normalizer_.variance_to_raw(p.variance)};
}

double GpModel::log_marginal_likelihood() const {
  const Eigen::Index t = training_.size();
  if (t == 0) {
    return 0.0;
  }
  const double data_fit = -0.5 * training_.targets.dot(alpha_);
  const double log_det_half = llt_.matrixLLT().diagonal().array().log().sum();
  return data_fit - log_det_half - 0.5 * static_cast<double>(t) * std::log(2.0 * std::numbers::pi);
}

Eigen::MatrixXd GpModel::factor() const {
  if (training_.size() == 0) {
    return Eigen::MatrixXd(0, 0);
  }
  return llt_.matrixL().toDenseMatrix();
}

double log_marginal_likelihood(const TrainingSet& training, const Hyperparams& hyper) {
  if (training.size() < 1) {
    throw ContractViolation("log marginal likelihood needs at least one observation");
  }
  return GpModel::fit(training, hyper).log_marginal_likelihood();
}

void HyperparamBounds::validate() const {
  for (const Interval* iv : {&signal_variance, &length_scale, &noise_variance}) {
    if (!positive_finite(iv->lower) || !positive_finite(iv->upper) || iv->lower > iv->upper) {
      throw ContractViolation("hyperparameter bounds must be positive with lower <= upper");
    }
  }
}

HyperparamFit optimize_hyperparameters(const TrainingSet& training, const HyperparamBounds& bounds, int restarts,
                                       std::uint64_t seed) {
  if (training.size() < 2) {
    throw ContractViolation("hyperparameter optimization needs at least two observations");
  }
  if (restarts < 1) {
    throw ContractViolation("hyperparameter optimization needs at least one restart");
  }
  bounds.validate();

  const auto d = static_cast<std::size_t>(training.dim());
  const std::size_t n_params = d + 2;
  // Parameter layout: [signal_variance, length_scales..., noise_variance],
  // optimized as z in [0, 1]^n mapped affinely onto the log box.
  Eigen::VectorXd log_lo(static_cast<Eigen::Index>(n_params));
  Eigen::VectorXd log_hi(static_cast<Eigen::Index>(n_params));
  log_lo(0) = std::log(bounds.signal_variance.lower);
  log_hi(0) = std::log(bounds.signal_variance.upper);
  for (std::size_t i = 0; i < d; ++i) {
    log_lo(static_cast<Eigen::Index>(i + 1)) = std::log(bounds.length_scale.lower);
    log_hi(static_cast<Eigen::Index>(i + 1)) = std::log(bounds.length_scale.upper);
  }
  log_lo(static_cast<Eigen::Index>(n_params - 1)) = std::log(bounds.noise_variance.lower);
  log_hi(static_cast<Eigen::Index>(n_params - 1)) = std::log(bounds.noise_variance.upper);

  auto decode = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd zc = z.cwiseMax(0.0).cwiseMin(1.0);
    const Eigen::VectorXd theta = log_lo + zc.cwiseProduct(log_hi - log_lo);
    Hyperparams h;
    h.signal_variance = std::exp(theta(0));
    h.length_scales.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      h.length_scales[i] = std::exp(theta(static_cast<Eigen::Index>(i + 1)));
    }
    h.noise_variance = std::exp(theta(static_cast<Eigen::Index>(n_params - 1)));
    return h;
  };
  auto negative_lml = [&](const Eigen::VectorXd& z) {
    try {
      return -GpModel::fit(training, decode(z)).log_marginal_likelihood();
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  SimplexOptions options;
  options.initial_step = 0.1;
  options.x_tolerance = 1e-4;
  options.f_tolerance = 1e-9;
  options.max_evaluations = 400;

  Rng rng(seed);
  HyperparamFit best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd z0(static_cast<Eigen::Index>(n_params));
    for (Eigen::Index i = 0; i < z0.size(); ++i) {
      z0(i) = rng.uniform();
    }
    const double start_value = negative_lml(z0);
    best.start_log_likelihoods.push_back(-start_value);
    const SimplexResult res = minimize_simplex(negative_lml, z0, options);
    if (!std::isfinite(res.value)) {
      continue;
    }
    const double lml = -res.value;
    if (!found || lml > best.log_likelihood) {
      found = true;
      best.log_likelihood = lml;
      best.hyper = decode(res.x);
      best.restart = r;
    }
  }
  if (!found) {
    throw NumericalError("every hyperparameter restart failed to factorize", jitter_ladder());
  }
  return best;
}

}  // namespace grindopt::gp
