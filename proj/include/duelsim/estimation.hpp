#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "duelsim/lst_core.hpp"

namespace duelsim {

/// Settings for the maximum-likelihood fit over the ball Theta = {||theta|| <= B}.
struct MleOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-6;
  double domain_radius = 1.0;
  double step_damping = 1.0;  // in (0, 1]; scales every accepted step

  void validate() const;
};

/// Default options for dimension d: B = sqrt(d).
MleOptions default_mle_options(std::size_t d);

struct MleResult {
  Eigen::VectorXd theta;
  double log_likelihood = 0.0;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  bool converged = true;  // false when max_iterations ran out
};

Eigen::VectorXd project_to_ball(const Eigen::VectorXd& v, double radius);

/// Maximizes log_likelihood over Theta starting from `warm_start`.
///
/// Fisher-scoring steps (Newton for BTL) with backtracking; when a projected
/// scoring step cannot improve the objective, a projected gradient step is
/// taken instead. The result never has a lower likelihood than the projected
/// warm start. Empty history returns the zero vector.
MleResult fit_mle(std::span<const DuelObservation> obs, const ComparisonModel& model,
                  const MleOptions& opts, const Eigen::VectorXd& warm_start);

/// Same fit over a packed history: column k of `contrasts` is z_k, `outcomes`
/// holds y_k. Avoids repacking when the caller keeps the history in this form.
MleResult fit_mle_packed(const Eigen::Ref<const Eigen::MatrixXd>& contrasts,
                         const Eigen::Ref<const Eigen::VectorXi>& outcomes,
                         const ComparisonModel& model, const MleOptions& opts,
                         const Eigen::VectorXd& warm_start);

/// One online step on the estimating equation:
/// project(theta + lr * (y - F(<theta,z>)) * z, radius).
Eigen::VectorXd sgd_step(const Eigen::VectorXd& theta, const DuelObservation& obs,
                         const ComparisonModel& model, double learning_rate, double radius);

}  // namespace duelsim
