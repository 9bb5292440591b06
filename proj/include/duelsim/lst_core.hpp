#pragma once

// Linear stochastic transitivity (LST) building blocks: comparison functions,
// perturbation noise, and the pairwise log-likelihood.
//
// An LST model says P(i beats j) = F(u_i - u_j) for a symmetric CDF F. The
// same probabilities arise from adding iid noise eps ~ G to every utility and
// reporting the larger perturbed utility; F is then the CDF of eps_j - eps_i.
// The three supported pairings are
//
//   Gumbel(scale s)       <-> BTL:                F(x) = 1 / (1 + exp(-x/s))
//   Gaussian(scale s)     <-> Thurstone-Mosteller: F(x) = Phi(x / (sqrt(2) s))
//   Exponential(mean s)   <-> Laplace:             F(x) = 1/2 + sgn(x)(1 - exp(-|x|/s))/2

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "duelsim/random.hpp"

namespace duelsim {

/// Floor applied to probabilities before taking logarithms.
inline constexpr double kProbabilityFloor = 1e-12;

enum class ModelKind { BTL, ThurstoneMosteller, ExponentialNoise };

struct ComparisonModel {
  ModelKind kind = ModelKind::BTL;
  double scale = 1.0;

  static ComparisonModel btl() { return {ModelKind::BTL, 1.0}; }
  static ComparisonModel thurstone_mosteller() { return {ModelKind::ThurstoneMosteller, 1.0}; }
  static ComparisonModel exponential_noise(double scale) {
    return {ModelKind::ExponentialNoise, scale};
  }
};

enum class NoiseKind { Gumbel, Gaussian, Exponential };

struct PerturbationDistribution {
  NoiseKind kind = NoiseKind::Gumbel;
  double location = 0.0;
  double scale = 1.0;

  static PerturbationDistribution gumbel() { return {NoiseKind::Gumbel, 0.0, 1.0}; }
  static PerturbationDistribution gaussian(double scale = 1.0) {
    return {NoiseKind::Gaussian, 0.0, scale};
  }
  static PerturbationDistribution exponential(double scale = 1.0) {
    return {NoiseKind::Exponential, 0.0, scale};
  }
};

/// The comparison function induced by sorting utilities perturbed with `noise`.
ComparisonModel induced_model(const PerturbationDistribution& noise);

std::string_view to_string(ModelKind kind);
std::string_view to_string(NoiseKind kind);
/// Accepts "gumbel", "gaussian"/"normal", "exponential". Throws ParameterError.
NoiseKind parse_noise_kind(std::string_view name);

struct DuelObservation {
  std::size_t round = 0;
  std::size_t first = 0;
  std::size_t second = 0;
  Eigen::VectorXd contrast;  // x_first - x_second
  int outcome = 0;           // 1 iff first beat second
};

/// F(delta). Throws std::domain_error for non-finite delta.
double comparison_prob(const ComparisonModel& model, double delta);

struct Derivative {
  double value = 0.0;
  // Set for ExponentialNoise at delta == 0, where the Laplace density has its
  // kink; `value` is then the one-sided limit.
  bool one_sided = false;
};

Derivative comparison_deriv(const ComparisonModel& model, double delta);

/// One draw from G. Throws ParameterError when scale <= 0.
double sample_perturbation(const PerturbationDistribution& dist, Stream& stream);

/// Clamp to [-c_thresh, c_thresh].
double truncate_perturbation(double eps, double c_thresh);

/// Sum over observations of y ln F(<theta,z>) + (1-y) ln F(-<theta,z>), with F
/// floored at kProbabilityFloor. Empty input gives 0.
double log_likelihood(const Eigen::VectorXd& theta, std::span<const DuelObservation> obs,
                      const ComparisonModel& model);

/// Exact gradient of log_likelihood. For BTL with unit scale this is the
/// familiar score sum_s (y_s - F(<theta,z_s>)) z_s.
Eigen::VectorXd log_likelihood_grad(const Eigen::VectorXd& theta,
                                    std::span<const DuelObservation> obs,
                                    const ComparisonModel& model);

/// d/d(delta) of one observation's log-likelihood term.
double log_likelihood_slope(const ComparisonModel& model, double delta, int outcome);

/// Fisher weight F'(delta)^2 / (F(delta) F(-delta)); equals F(1-F) for unit BTL.
double fisher_weight(const ComparisonModel& model, double delta);

}  // namespace duelsim
