#include "duelsim/policy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "duelsim/errors.hpp"

namespace duelsim {

ArmPair random_distinct_pair(std::size_t n, Stream& stream) {
  if (n < 2) throw ParameterError("need at least two arms to form a pair");
  const std::size_t i = stream.index(n);
  std::size_t j = stream.index(n - 1);
  if (j >= i) ++j;
  return {i, j};
}

void HyperParams::validate() const {
  if (!(c_thresh > 0.0)) throw ParameterError("c_thresh must be positive");
  if (!(c2 > 0.0)) throw ParameterError("c2 must be positive");
  if (!(c2 <= c1)) throw ParameterError("c2 must not exceed c1");
  if (relaxed_threshold ? !(c_thresh <= c2) : !(c_thresh < c2)) {
    throw ParameterError(relaxed_threshold ? "c_thresh must not exceed c2"
                                           : "c_thresh must be strictly below c2");
  }
  if (!coupling) throw ParameterError("coupling schedule is empty");
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be positive");
  if (!(ridge > 0.0)) throw ParameterError("ridge must be positive");
  if (!(perturbation.scale > 0.0)) throw ParameterError("perturbation scale must be positive");
  if (!(assumed_model.scale > 0.0)) throw ParameterError("model scale must be positive");
  if (!(theory.mu > 0.0 && theory.rho > 0.0)) throw ParameterError("mu and rho must be positive");
  mle.validate();
}

double HyperParams::coupling_probability(std::size_t t) const {
  const double p = coupling(t);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("coupling probability outside [0,1] at t=" + std::to_string(t));
  }
  return p;
}

LinearEstimator::LinearEstimator(std::size_t d, EstimatorMode mode, ComparisonModel model,
                                 double learning_rate, double ridge, MleOptions mle)
    : mode_(mode),
      model_(model),
      learning_rate_(learning_rate),
      mle_(mle),
      gram_(d, ridge),
      estimate_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))),
      packed_contrasts_(static_cast<Eigen::Index>(d), 0) {
  mle_.validate();
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be positive");
}

void LinearEstimator::observe(DuelObservation obs, bool refit_now) {
  gram_.rank_one_update(obs.contrast);
  ++observed_;
  if (mode_ == EstimatorMode::SGD) {
    const auto start = std::chrono::steady_clock::now();
    estimate_ = sgd_step(estimate_, obs, model_, learning_rate_, mle_.domain_radius);
    estimator_ns_ += std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return;
  }
  const auto count = static_cast<Eigen::Index>(history_.size());
  if (count == packed_contrasts_.cols()) {
    // grow geometrically so appends stay amortized O(d)
    const Eigen::Index capacity = std::max<Eigen::Index>(64, 2 * count);
    packed_contrasts_.conservativeResize(Eigen::NoChange, capacity);
    packed_outcomes_.conservativeResize(capacity);
  }
  packed_contrasts_.col(count) = obs.contrast;
  packed_outcomes_(count) = obs.outcome;
  history_.push_back(std::move(obs));
  if (refit_now) refit();
}

void LinearEstimator::refit() {
  if (mode_ != EstimatorMode::FullMLE) return;
  const auto start = std::chrono::steady_clock::now();
  const auto count = static_cast<Eigen::Index>(history_.size());
  MleResult fit = fit_mle_packed(packed_contrasts_.leftCols(count), packed_outcomes_.head(count),
                                 model_, mle_, estimate_);
  estimate_ = std::move(fit.theta);
  last_fit_converged_ = fit.converged;
  estimator_ns_ += std::chrono::duration_cast<std::chrono::nanoseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
}

}  // namespace duelsim
