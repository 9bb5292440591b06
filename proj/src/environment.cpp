#include "duelsim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "duelsim/errors.hpp"

namespace duelsim {

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Easy: return "easy";
    case Scenario::Medium: return "medium";
    case Scenario::Hard: return "hard";
    case Scenario::Custom: return "custom";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "easy" || name == "E") return Scenario::Easy;
  if (name == "medium" || name == "M") return Scenario::Medium;
  if (name == "hard" || name == "H") return Scenario::Hard;
  if (name == "custom") return Scenario::Custom;
  throw ParameterError("unknown scenario '" + std::string(name) + "'");
}

NormBand scenario_band(Scenario scenario, std::size_t d) {
  const double root = std::sqrt(static_cast<double>(d));
  switch (scenario) {
    case Scenario::Easy: return {0.0, 1.0 / root};
    case Scenario::Medium: return {1.0 / root, 1.0};
    case Scenario::Hard: return {1.0, root};
    case Scenario::Custom: break;
  }
  throw ParameterError("scenario has no norm band");
}

Eigen::VectorXd sample_unit_sphere(std::size_t d, Stream& stream) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  double norm = 0.0;
  do {
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = stream.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

Eigen::VectorXd sample_unit_ball(std::size_t d, Stream& stream) {
  Eigen::VectorXd dir = sample_unit_sphere(d, stream);
  const double radius = std::pow(stream.uniform(), 1.0 / static_cast<double>(d));
  return radius * dir;
}

ProblemInstance generate_instance(Scenario scenario, std::size_t n, std::size_t d,
                                  const ComparisonModel& true_model,
                                  const PerturbationDistribution& true_noise, Stream& stream) {
  if (n < 2) throw ParameterError("need at least two arms");
  if (d < 1) throw ParameterError("dimension must be at least 1");
  const NormBand band = scenario_band(scenario, d);
  Eigen::VectorXd dir = sample_unit_sphere(d, stream);
  // Uniform over the shell's volume: the norm's CDF is proportional to r^d.
  // uniform() is in (0,1), so the Easy band's open lower edge is respected.
  const double dd = static_cast<double>(d);
  const double lo = std::pow(band.lower, dd);
  const double hi = std::pow(band.upper, dd);
  const double norm = std::pow(lo + (hi - lo) * stream.uniform(), 1.0 / dd);
  ProblemInstance inst{n, d, norm * dir, true_model, true_noise, scenario};
  return inst;
}

ProblemInstance make_instance(std::size_t n, Eigen::VectorXd theta_star,
                              const ComparisonModel& true_model,
                              const PerturbationDistribution& true_noise) {
  if (n < 2) throw ParameterError("need at least two arms");
  if (theta_star.size() < 1) throw ParameterError("dimension must be at least 1");
  const auto d = static_cast<std::size_t>(theta_star.size());
  return ProblemInstance{n, d, std::move(theta_star), true_model, true_noise, Scenario::Custom};
}

ContextMatrix sample_context(const ProblemInstance& instance, Stream& stream) {
  ContextMatrix ctx{Eigen::MatrixXd(static_cast<Eigen::Index>(instance.d),
                                    static_cast<Eigen::Index>(instance.n))};
  for (std::size_t i = 0; i < instance.n; ++i) {
    ctx.columns.col(static_cast<Eigen::Index>(i)) = sample_unit_ball(instance.d, stream);
  }
  return ctx;
}

Eigen::VectorXd contrast(const ContextMatrix& ctx, std::size_t i, std::size_t j) {
  if (i >= ctx.arms() || j >= ctx.arms()) throw std::out_of_range("arm index out of range");
  return ctx.arm(i) - ctx.arm(j);
}

int sample_feedback(const ProblemInstance& instance, const ContextMatrix& ctx, std::size_t i,
                    std::size_t j, Stream& stream) {
  const double delta = contrast(ctx, i, j).dot(instance.theta_star);
  return stream.bernoulli(comparison_prob(instance.true_model, delta)) ? 1 : 0;
}

std::size_t best_arm(const Eigen::VectorXd& utilities) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < utilities.size(); ++k) {
    if (utilities(k) > utilities(best)) best = k;
  }
  return static_cast<std::size_t>(best);
}

Regret instant_regret(const Eigen::VectorXd& utilities, std::size_t i, std::size_t j) {
  const auto n = static_cast<std::size_t>(utilities.size());
  if (i >= n || j >= n) throw std::out_of_range("arm index out of range");
  const double top = utilities(static_cast<Eigen::Index>(best_arm(utilities)));
  // Working from the two gaps keeps weak <= average exact in floating point.
  const double gi = top - utilities(static_cast<Eigen::Index>(i));
  const double gj = top - utilities(static_cast<Eigen::Index>(j));
  return {(gi + gj) / 2.0, std::min(gi, gj)};
}

Regret instant_regret(const ProblemInstance& instance, const ContextMatrix& ctx, std::size_t i,
                      std::size_t j) {
  const Eigen::VectorXd utilities = ctx.columns.transpose() * instance.theta_star;
  return instant_regret(utilities, i, j);
}

void RegretLedger::record(const Regret& r) {
  average_.push_back(r.average);
  weak_.push_back(r.weak);
  cum_average_.push_back(total_average() + r.average);
  cum_weak_.push_back(total_weak() + r.weak);
}

}  // namespace duelsim
