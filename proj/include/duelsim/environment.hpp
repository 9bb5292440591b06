#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "duelsim/lst_core.hpp"
#include "duelsim/random.hpp"

namespace duelsim {

enum class Scenario { Easy, Medium, Hard, Custom };

std::string_view to_string(Scenario scenario);
/// "easy" / "medium" / "hard" (also "E", "M", "H"). Throws ParameterError.
Scenario parse_scenario(std::string_view name);

/// Admissible range of ||theta*|| for a scenario in dimension d:
/// Easy (0, 1/sqrt d], Medium [1/sqrt d, 1], Hard [1, sqrt d].
struct NormBand {
  double lower;
  double upper;
};
NormBand scenario_band(Scenario scenario, std::size_t d);

struct ProblemInstance {
  std::size_t n = 0;
  std::size_t d = 0;
  Eigen::VectorXd theta_star;
  ComparisonModel true_model;
  PerturbationDistribution true_noise;
  Scenario scenario = Scenario::Custom;
};

/// Samples theta* uniformly from the part of the l2 ball inside the
/// scenario's norm band. Custom is rejected; build those with make_instance.
ProblemInstance generate_instance(Scenario scenario, std::size_t n, std::size_t d,
                                  const ComparisonModel& true_model,
                                  const PerturbationDistribution& true_noise, Stream& stream);

ProblemInstance make_instance(std::size_t n, Eigen::VectorXd theta_star,
                              const ComparisonModel& true_model,
                              const PerturbationDistribution& true_noise);

/// Context vectors of one round, one column per arm.
struct ContextMatrix {
  Eigen::MatrixXd columns;  // d x n

  std::size_t arms() const { return static_cast<std::size_t>(columns.cols()); }
  std::size_t dim() const { return static_cast<std::size_t>(columns.rows()); }
  auto arm(std::size_t i) const { return columns.col(static_cast<Eigen::Index>(i)); }
};

/// Uniform point in the d-dimensional closed unit ball.
Eigen::VectorXd sample_unit_ball(std::size_t d, Stream& stream);
Eigen::VectorXd sample_unit_sphere(std::size_t d, Stream& stream);

ContextMatrix sample_context(const ProblemInstance& instance, Stream& stream);

/// x_i - x_j. Throws std::out_of_range for a bad index.
Eigen::VectorXd contrast(const ContextMatrix& ctx, std::size_t i, std::size_t j);

/// Bernoulli(F*(<x_i - x_j, theta*>)); 1 means i won.
int sample_feedback(const ProblemInstance& instance, const ContextMatrix& ctx, std::size_t i,
                    std::size_t j, Stream& stream);

struct Regret {
  double average = 0.0;
  double weak = 0.0;
};

/// Index of the best arm for `utilities` (lowest index on ties).
std::size_t best_arm(const Eigen::VectorXd& utilities);

Regret instant_regret(const Eigen::VectorXd& utilities, std::size_t i, std::size_t j);
Regret instant_regret(const ProblemInstance& instance, const ContextMatrix& ctx, std::size_t i,
                      std::size_t j);

/// Per-round and cumulative average / weak regret.
class RegretLedger {
 public:
  void record(const Regret& r);

  std::size_t rounds() const { return average_.size(); }
  const std::vector<double>& average() const { return average_; }
  const std::vector<double>& weak() const { return weak_; }
  const std::vector<double>& cumulative_average() const { return cum_average_; }
  const std::vector<double>& cumulative_weak() const { return cum_weak_; }
  double total_average() const { return cum_average_.empty() ? 0.0 : cum_average_.back(); }
  double total_weak() const { return cum_weak_.empty() ? 0.0 : cum_weak_.back(); }

 private:
  std::vector<double> average_;
  std::vector<double> weak_;
  std::vector<double> cum_average_;
  std::vector<double> cum_weak_;
};

}  // namespace duelsim
