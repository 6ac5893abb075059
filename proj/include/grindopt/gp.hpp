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

#ifndef GRINDOPT_GP_HPP
#define GRINDOPT_GP_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace grindopt::gp {

/// Matern-5/2 ARD hyperparameters, all in normalized units.
struct Hyperparams {
  double signal_variance = 1.0;
  std::vector<double> length_scales;
  double noise_variance = 1e-2;

  std::size_t dim() const noexcept { return length_scales.size(); }

  /// Throws ContractViolation unless every entry is finite and strictly
  /// positive and there is one length scale per input dimension.
  void validate(std::size_t input_dim) const;

  bool operator==(const Hyperparams&) const = default;
};

/// t observations: one row of `inputs` per target.
struct TrainingSet {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd targets;

  TrainingSet() = default;
  TrainingSet(Eigen::MatrixXd x, Eigen::VectorXd y);

  Eigen::Index size() const noexcept { return targets.size(); }
  Eigen::Index dim() const noexcept { return inputs.cols(); }
};

/// k(x, x') = sf2 (1 + sqrt5 r + 5/3 r^2) exp(-sqrt5 r),
/// r^2 = sum_i (x_i - x'_i)^2 / l_i^2.
double kernel(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& x2,
              const Hyperparams& hyper);

/// Full kernel matrix over the rows of `inputs` (no noise term).
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& inputs, const Hyperparams& hyper);

/// Per-dimension affine map from a box onto the unit cube. Default-constructed
/// instances are the identity.
class InputNormalizer {
 public:
  InputNormalizer() = default;
  InputNormalizer(Eigen::VectorXd lower, Eigen::VectorXd upper);

  Eigen::VectorXd to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const;
  bool is_identity() const noexcept { return lower_.size() == 0; }

  const Eigen::VectorXd& lower() const noexcept { return lower_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// y_norm = (y - center) / scale.
class OutputNormalizer {
 public:
  OutputNormalizer() = default;
  OutputNormalizer(double center, double scale);

  /// Zero mean / unit sample variance over `targets`. A constant (or single)
  /// target keeps scale 1.
  static OutputNormalizer standardizing(const Eigen::VectorXd& targets);

  double center() const noexcept { return center_; }
  double scale() const noexcept { return scale_; }

  Eigen::VectorXd normalize(const Eigen::VectorXd& y) const;
  double mean_to_raw(double mean) const noexcept { return center_ + scale_ * mean; }
  double variance_to_raw(double variance) const noexcept { return scale_ * scale_ * variance; }

 private:
  double center_ = 0.0;
  double scale_ = 1.0;
};

struct PosteriorPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Jitter ladder tried when K + sn2 I is not numerically positive definite.
std::vector<double> jitter_ladder();

/// Exact GP posterior conditioned on a training set. Immutable once fitted and
/// safe to share between threads.
class GpModel {
 public:
  /// The training set is in normalized coordinates; the normalizers describe
  /// how raw queries and raw outputs relate to it. Throws NumericalError if the
  /// factorization fails after jitter escalation.
  static GpModel fit(TrainingSet training, Hyperparams hyper, InputNormalizer input_normalizer = {},
                     OutputNormalizer output_normalizer = {});

  /// Prediction at a raw-domain query, returned in raw output units.
  PosteriorPrediction predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Prediction at a normalized query, in normalized output units.
  PosteriorPrediction predict_normalized(const Eigen::Ref<const Eigen::VectorXd>& u) const;

  /// Log marginal likelihood of the (normalized) training targets.
  double log_marginal_likelihood() const;

  const TrainingSet& training() const noexcept { return training_; }
  const Hyperparams& hyper() const noexcept { return hyper_; }
  const InputNormalizer& input_normalizer() const noexcept { return input_normalizer_; }
  const OutputNormalizer& output_normalizer() const noexcept { return output_normalizer_; }
  /// Lower Cholesky factor of K + (sn2 + jitter) I.
  Eigen::MatrixXd factor() const;
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  double jitter() const noexcept { return jitter_; }
  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(hyper_.dim()); }

 private:
  GpModel() = default;

  TrainingSet training_;
  Hyperparams hyper_;
  InputNormalizer input_normalizer_;
  OutputNormalizer output_normalizer_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

double log_marginal_likelihood(const TrainingSet& training, const Hyperparams& hyper);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const Interval&) const = default;
};

/// Search box for hyperparameter fitting, normalized units. Setting
/// lower == upper pins a parameter.
struct HyperparamBounds {
  Interval signal_variance{1e-4, 1e2};
  Interval length_scale{0.05, 10.0};
  Interval noise_variance{1e-6, 1.0};

  void validate() const;

  bool operator==(const HyperparamBounds&) const = default;
};

struct HyperparamFit {
  Hyperparams hyper;
  double log_likelihood = 0.0;
  int restart = 0;
  /// Log likelihood at each restart's starting point (-inf if it failed).
  std::vector<double> start_log_likelihoods;
};

/// Best of `restarts` simplex maximizations of the log marginal likelihood in
/// log-hyperparameter space; start points are uniform in the log box. Throws
/// NumericalError if every restart fails to factorize.
HyperparamFit optimize_hyperparameters(const TrainingSet& training, const HyperparamBounds& bounds, int restarts,
                                       std::uint64_t seed);

}  // namespace grindopt::gp

#endif  // GRINDOPT_GP_HPP
