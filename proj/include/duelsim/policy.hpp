#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "duelsim/environment.hpp"
#include "duelsim/estimation.hpp"
#include "duelsim/gram.hpp"
#include "duelsim/lst_core.hpp"
#include "duelsim/random.hpp"

namespace duelsim {

/// Arms chosen for one duel (0-based). first == second is a self-duel.
struct ArmPair {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const ArmPair&, const ArmPair&) = default;
};

/// Uniform over unordered pairs {i, j} with i != j; the order is random too.
ArmPair random_distinct_pair(std::size_t n, Stream& stream);

/// Common interface driven by the experiment harness, one call pair per round:
/// select(context) then update(context, pair, outcome).
class Policy {
 public:
  virtual ~Policy() = default;

  virtual ArmPair select(const ContextMatrix& ctx) = 0;
  virtual void update(const ContextMatrix& ctx, ArmPair pair, int outcome) = 0;

  /// Wall time spent inside the weight estimator (MLE or SGD) so far.
  virtual std::int64_t estimator_ns() const { return 0; }
};

enum class EstimatorMode { FullMLE, SGD };

/// Coupling probability p_t as a function of the round index t (1-based).
using CouplingSchedule = std::function<double(std::size_t)>;

/// Constants used only by the theory-mode schedules.
struct TheoryConstants {
  double mu = 0.25;
  double rho = 1.0;
};

/// Hyperparameters shared by CoLSTIM and Sup-CoLSTIM.
///
/// Ordering 0 < c_thresh < c2 <= c1 is enforced by validate(). The practical
/// experiment settings use c_thresh == c2 == c1; they set relaxed_threshold,
/// which admits c_thresh == c2 and nothing weaker.
struct HyperParams {
  double c1 = 1.0;
  double c2 = 1.0;
  double c_thresh = 0.5;
  std::size_t tau = 0;
  CouplingSchedule coupling = [](std::size_t) { return 1.0; };
  PerturbationDistribution perturbation = PerturbationDistribution::gumbel();
  ComparisonModel assumed_model = ComparisonModel::btl();
  EstimatorMode estimator_mode = EstimatorMode::SGD;
  TheoryConstants theory;
  bool relaxed_threshold = false;

  double learning_rate = 0.5;
  double ridge = 1e-6;
  MleOptions mle;

  /// Throws ParameterError on any violated invariant.
  void validate() const;
  /// p_t, checked to lie in [0, 1].
  double coupling_probability(std::size_t t) const;
};

/// Weight-vector estimate plus Gram matrix for one stream of duels.
///
/// In FullMLE mode the observation history is retained and refit() maximizes
/// the likelihood over all of it, warm-started at the current estimate. In SGD
/// mode every observation triggers one projected SGD step and no history is
/// kept.
class LinearEstimator {
 public:
  LinearEstimator(std::size_t d, EstimatorMode mode, ComparisonModel model, double learning_rate,
                  double ridge, MleOptions mle);

  /// Updates the Gram matrix and, in SGD mode, the estimate. In FullMLE mode
  /// the estimate is refit only when `refit_now` is set.
  void observe(DuelObservation obs, bool refit_now);
  void refit();

  const Eigen::VectorXd& estimate() const { return estimate_; }
  void set_estimate(Eigen::VectorXd theta) { estimate_ = std::move(theta); }
  const GramState& gram() const { return gram_; }
  std::span<const DuelObservation> history() const { return history_; }
  EstimatorMode mode() const { return mode_; }
  std::size_t observations() const { return observed_; }
  std::int64_t estimator_ns() const { return estimator_ns_; }
  /// Result flag of the most recent full fit (true in SGD mode).
  bool last_fit_converged() const { return last_fit_converged_; }

 private:
  EstimatorMode mode_;
  ComparisonModel model_;
  double learning_rate_;
  MleOptions mle_;
  GramState gram_;
  Eigen::VectorXd estimate_;
  std::vector<DuelObservation> history_;
  Eigen::MatrixXd packed_contrasts_;  // d x capacity, first history_.size() columns live
  Eigen::VectorXi packed_outcomes_;
  std::size_t observed_ = 0;
  std::int64_t estimator_ns_ = 0;
  bool last_fit_converged_ = true;
};

}  // namespace duelsim
