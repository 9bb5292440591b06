#include "duelsim/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "duelsim/errors.hpp"

namespace duelsim {

void MleOptions::validate() const {
  if (max_iterations < 1) throw ParameterError("max_iterations must be at least 1");
  if (!(gradient_tolerance > 0.0)) throw ParameterError("gradient_tolerance must be positive");
  if (!(domain_radius > 0.0)) throw ParameterError("domain_radius must be positive");
  if (!(step_damping > 0.0 && step_damping <= 1.0)) {
    throw ParameterError("step_damping must lie in (0, 1]");
  }
}

MleOptions default_mle_options(std::size_t d) {
  MleOptions opts;
  opts.domain_radius = std::sqrt(static_cast<double>(d));
  return opts;
}

Eigen::VectorXd project_to_ball(const Eigen::VectorXd& v, double radius) {
  const double norm = v.norm();
  if (norm <= radius) return v;
  return v * (radius / norm);
}

namespace {

struct Terms {
  double value;
  double slope;
  double weight;
};

// One observation's log-likelihood term, its slope in delta and its Fisher weight.
Terms observation_terms(const ComparisonModel& model, double delta, int outcome) {
  if (model.kind == ModelKind::BTL) {
    // one exponential serves both tails
    const double x = delta / model.scale;
    const double e = std::exp(-std::abs(x));
    const double big = 1.0 / (1.0 + e);
    const double small = e / (1.0 + e);
    const double p = x >= 0.0 ? big : small;
    const double q = x >= 0.0 ? small : big;
    const double s2 = model.scale * model.scale;
    if (outcome == 1) {
      return {std::log(std::max(p, kProbabilityFloor)), p > kProbabilityFloor ? q / model.scale : 0.0,
              p * q / s2};
    }
    return {std::log(std::max(q, kProbabilityFloor)), q > kProbabilityFloor ? -p / model.scale : 0.0,
            p * q / s2};
  }
  const double p = comparison_prob(model, outcome == 1 ? delta : -delta);
  return {std::log(std::max(p, kProbabilityFloor)), log_likelihood_slope(model, delta, outcome),
          fisher_weight(model, delta)};
}

struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd info;
};

class Objective {
 public:
  Objective(const Eigen::Ref<const Eigen::MatrixXd>& z, const Eigen::Ref<const Eigen::VectorXi>& y,
            const ComparisonModel& model)
      : z_(z), y_(y), model_(model), slope_(z.cols()), weight_(z.cols()) {}

  Evaluation operator()(const Eigen::VectorXd& theta) {
    const Eigen::VectorXd delta = z_.transpose() * theta;
    Evaluation e;
    for (Eigen::Index k = 0; k < delta.size(); ++k) {
      const Terms t = observation_terms(model_, delta(k), y_(k));
      e.value += t.value;
      slope_(k) = t.slope;
      weight_(k) = t.weight;
    }
    e.grad.noalias() = z_ * slope_;
    e.info.noalias() = (z_.array().rowwise() * weight_.transpose().array()).matrix() * z_.transpose();
    return e;
  }

 private:
  Eigen::Ref<const Eigen::MatrixXd> z_;
  Eigen::Ref<const Eigen::VectorXi> y_;
  const ComparisonModel& model_;
  Eigen::VectorXd slope_;
  Eigen::VectorXd weight_;
};

// Maximizer over ||x|| <= radius of g'(x - x0) - (x - x0)'H(x - x0)/2 for positive
// definite H. Outside the ball the solution is (H + lambda I)^{-1}(H x0 + g) with
// lambda >= 0 fixed by ||x|| = radius; the norm is monotone in lambda.
Eigen::VectorXd ball_model_maximizer(const Eigen::MatrixXd& h, const Eigen::VectorXd& g,
                                     const Eigen::VectorXd& x0, double radius) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const Eigen::VectorXd b = eig.eigenvectors().transpose() * (h * x0 + g);
  auto solution_norm = [&](double lambda) {
    return (b.array() / (values.array() + lambda)).matrix().norm();
  };
  double lo = 0.0;
  if (values.minCoeff() > 0.0 && solution_norm(lo) <= radius) {
    return eig.eigenvectors() * (b.array() / values.array()).matrix();
  }
  lo = std::max(0.0, -values.minCoeff());
  double hi = std::max(1.0, 2.0 * lo);
  while (solution_norm(hi) > radius) hi *= 2.0;
  for (int k = 0; k < 200 && hi - lo > 1e-14 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (solution_norm(mid) > radius ? lo : hi) = mid;
  }
  return eig.eigenvectors() * (b.array() / (values.array() + hi)).matrix();
}

double projected_gradient_norm(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad,
                               double radius) {
  return (project_to_ball(theta + grad, radius) - theta).norm();
}

}  // namespace

MleResult fit_mle(std::span<const DuelObservation> obs, const ComparisonModel& model,
                  const MleOptions& opts, const Eigen::VectorXd& warm_start) {
  const auto d = warm_start.size();
  Eigen::MatrixXd z(d, static_cast<Eigen::Index>(obs.size()));
  Eigen::VectorXi y(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t k = 0; k < obs.size(); ++k) {
    if (obs[k].contrast.size() != d) throw ParameterError("observation contrast has wrong dimension");
    z.col(static_cast<Eigen::Index>(k)) = obs[k].contrast;
    y(static_cast<Eigen::Index>(k)) = obs[k].outcome;
  }
  return fit_mle_packed(z, y, model, opts, warm_start);
}

MleResult fit_mle_packed(const Eigen::Ref<const Eigen::MatrixXd>& contrasts,
                         const Eigen::Ref<const Eigen::VectorXi>& outcomes,
                         const ComparisonModel& model, const MleOptions& opts,
                         const Eigen::VectorXd& warm_start) {
  opts.validate();
  const auto d = warm_start.size();
  if (contrasts.rows() != d || contrasts.cols() != outcomes.size()) {
    throw ParameterError("packed history has inconsistent shape");
  }
  MleResult result;
  if (contrasts.cols() == 0) {
    result.theta = Eigen::VectorXd::Zero(d);
    return result;
  }

  Objective f(contrasts, outcomes, model);
  const double radius = opts.domain_radius;
  Eigen::VectorXd theta = project_to_ball(warm_start, radius);
  Evaluation current = f(theta);

  double pg = projected_gradient_norm(theta, current.grad, radius);

  // Accepts the first candidate along `direction` that raises the likelihood.
  auto line_search = [&](const Eigen::VectorXd& direction, double step, int halvings) {
    for (int k = 0; k < halvings && direction.allFinite(); ++k, step *= 0.5) {
      Eigen::VectorXd candidate = project_to_ball(theta + step * direction, radius);
      Evaluation e = f(candidate);
      // Near the optimum the gain drops below the objective's rounding error;
      // a step that keeps the value within roundoff and shrinks the projected
      // gradient is still progress.
      const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(current.value);
      const bool better = e.value > current.value ||
                          (e.value >= current.value - roundoff &&
                           projected_gradient_norm(candidate, e.grad, radius) < pg);
      if (better) {
        theta = std::move(candidate);
        current = std::move(e);
        return true;
      }
    }
    return false;
  };

  result.converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    pg = projected_gradient_norm(theta, current.grad, radius);
    result.projected_gradient_norm = pg;
    if (pg <= opts.gradient_tolerance) {
      result.converged = true;
      break;
    }

    // Scoring step towards the maximizer of the local quadratic model over the
    // ball; the tiny diagonal keeps it defined while the contrasts do not span R^d.
    Eigen::MatrixXd info = current.info;
    info.diagonal().array() += 1e-10 * (1.0 + info.diagonal().maxCoeff());
    const Eigen::VectorXd direction = ball_model_maximizer(info, current.grad, theta, radius) - theta;
    if (line_search(direction, opts.step_damping, 40)) continue;

    // Projected gradient ascent; 1/trace(info) is a safe initial step for
    // these concave objectives.
    const Eigen::VectorXd grad = current.grad;
    if (line_search(grad, opts.step_damping / (current.info.trace() + 1e-12), 60)) continue;

    // No representable ascent step left: numerically stationary.
    result.converged = true;
    break;
  }
  if (it == opts.max_iterations) {
    result.projected_gradient_norm = projected_gradient_norm(theta, current.grad, radius);
    result.converged = result.projected_gradient_norm <= opts.gradient_tolerance;
  }

  result.iterations = it;
  result.theta = std::move(theta);
  result.log_likelihood = current.value;
  return result;
}

Eigen::VectorXd sgd_step(const Eigen::VectorXd& theta, const DuelObservation& obs,
                         const ComparisonModel& model, double learning_rate, double radius) {
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be positive");
  if (obs.contrast.size() != theta.size()) {
    throw ParameterError("observation contrast has wrong dimension");
  }
  const double p = comparison_prob(model, theta.dot(obs.contrast));
  return project_to_ball(theta + learning_rate * (obs.outcome - p) * obs.contrast, radius);
}

}  // namespace duelsim
