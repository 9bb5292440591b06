#include "duelsim/lst_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "duelsim/errors.hpp"

namespace duelsim {

namespace {

void require_finite(double delta) {
  if (!std::isfinite(delta)) {
    throw std::domain_error("comparison function evaluated at non-finite delta");
  }
}

void require_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("scale must be positive, got " + std::to_string(scale));
  }
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

ComparisonModel induced_model(const PerturbationDistribution& noise) {
  require_scale(noise.scale);
  switch (noise.kind) {
    case NoiseKind::Gumbel: return {ModelKind::BTL, noise.scale};
    case NoiseKind::Gaussian: return {ModelKind::ThurstoneMosteller, noise.scale};
    case NoiseKind::Exponential: return {ModelKind::ExponentialNoise, noise.scale};
  }
  throw ParameterError("unknown noise kind");
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::BTL: return "btl";
    case ModelKind::ThurstoneMosteller: return "thurstone-mosteller";
    case ModelKind::ExponentialNoise: return "exponential-noise";
  }
  return "?";
}

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gumbel: return "gumbel";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Exponential: return "exponential";
  }
  return "?";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "gumbel") return NoiseKind::Gumbel;
  if (name == "gaussian" || name == "normal") return NoiseKind::Gaussian;
  if (name == "exponential") return NoiseKind::Exponential;
  throw ParameterError("unknown perturbation distribution '" + std::string(name) + "'");
}

double comparison_prob(const ComparisonModel& model, double delta) {
  require_finite(delta);
  require_scale(model.scale);
  const double x = delta / model.scale;
  switch (model.kind) {
    case ModelKind::BTL:
      return logistic(x);
    case ModelKind::ThurstoneMosteller:
      // Phi(x / sqrt 2) = erfc(-x / 2) / 2
      return 0.5 * std::erfc(-0.5 * x);
    case ModelKind::ExponentialNoise: {
      if (x == 0.0) return 0.5;
      const double tail = 0.5 * std::exp(-std::abs(x));
      return x > 0.0 ? 1.0 - tail : tail;
    }
  }
  throw ParameterError("unknown comparison model");
}

Derivative comparison_deriv(const ComparisonModel& model, double delta) {
  require_finite(delta);
  require_scale(model.scale);
  const double s = model.scale;
  const double x = delta / s;
  switch (model.kind) {
    case ModelKind::BTL: {
      const double p = logistic(x);
      return {p * (1.0 - p) / s, false};
    }
    case ModelKind::ThurstoneMosteller: {
      // density of N(0, 2 s^2)
      const double inv = 1.0 / (std::numbers::sqrt2 * s);
      const double u = x / std::numbers::sqrt2;
      return {inv * std::exp(-0.5 * u * u) * std::numbers::inv_sqrtpi / std::numbers::sqrt2,
              false};
    }
    case ModelKind::ExponentialNoise:
      return {0.5 * std::exp(-std::abs(x)) / s, delta == 0.0};
  }
  throw ParameterError("unknown comparison model");
}

double sample_perturbation(const PerturbationDistribution& dist, Stream& stream) {
  require_scale(dist.scale);
  switch (dist.kind) {
    case NoiseKind::Gumbel:
      // inverse CDF: G^{-1}(u) = -ln(-ln u)
      return dist.location - dist.scale * std::log(-std::log(stream.uniform()));
    case NoiseKind::Gaussian:
      return dist.location + dist.scale * stream.normal();
    case NoiseKind::Exponential:
      return dist.location - dist.scale * std::log(stream.uniform());
  }
  throw ParameterError("unknown noise kind");
}

double truncate_perturbation(double eps, double c_thresh) {
  return std::min(c_thresh, std::max(-c_thresh, eps));
}

double log_likelihood(const Eigen::VectorXd& theta, std::span<const DuelObservation> obs,
                      const ComparisonModel& model) {
  double total = 0.0;
  for (const auto& o : obs) {
    if (o.contrast.size() != theta.size()) {
      throw ParameterError("observation contrast has wrong dimension");
    }
    const double delta = theta.dot(o.contrast);
    const double p = comparison_prob(model, o.outcome == 1 ? delta : -delta);
    total += std::log(std::max(p, kProbabilityFloor));
  }
  return total;
}

double log_likelihood_slope(const ComparisonModel& model, double delta, int outcome) {
  const double density = comparison_deriv(model, delta).value;
  if (model.kind == ModelKind::BTL) {
    // density / F simplifies to (1 - F) / s, which stays accurate in the tails.
    const double p = comparison_prob(model, delta);
    const double q = comparison_prob(model, -delta);
    if (outcome == 1) return p > kProbabilityFloor ? q / model.scale : 0.0;
    return q > kProbabilityFloor ? -p / model.scale : 0.0;
  }
  if (outcome == 1) {
    const double p = comparison_prob(model, delta);
    return p > kProbabilityFloor ? density / p : 0.0;
  }
  const double q = comparison_prob(model, -delta);
  return q > kProbabilityFloor ? -density / q : 0.0;
}

double fisher_weight(const ComparisonModel& model, double delta) {
  const double p = comparison_prob(model, delta);
  const double q = comparison_prob(model, -delta);
  if (model.kind == ModelKind::BTL) return p * q / (model.scale * model.scale);
  const double density = comparison_deriv(model, delta).value;
  const double denom = std::max(p * q, kProbabilityFloor);
  return density * density / denom;
}

Eigen::VectorXd log_likelihood_grad(const Eigen::VectorXd& theta,
                                    std::span<const DuelObservation> obs,
                                    const ComparisonModel& model) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  for (const auto& o : obs) {
    if (o.contrast.size() != theta.size()) {
      throw ParameterError("observation contrast has wrong dimension");
    }
    const double delta = theta.dot(o.contrast);
    grad += log_likelihood_slope(model, delta, o.outcome) * o.contrast;
  }
  return grad;
}

}  // namespace duelsim
