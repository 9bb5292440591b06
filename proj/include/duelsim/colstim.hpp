#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "duelsim/policy.hpp"

namespace duelsim {

/// Scores behind one CoLSTIM choice, indexed by arm (NaN for inactive arms).
struct ColstimScores {
  std::vector<double> first;   // <x_i, theta> + eps_i ||x_i||
  std::vector<double> second;  // <x_k - x_i, theta> + c1 ||x_i - x_k||
};

/// The CoLSTIM pair rule over the arms in `active` (empty span = all arms).
///
/// First arm: argmax of the perturbed utility <x_i, theta> + eps_i ||x_i||_{M^-1}.
/// Second arm: the first arm's toughest competitor,
///   argmax_k <x_k - x_i, theta> + c1 ||x_i - x_k||_{M^-1},
/// with k ranging over every active arm, the first arm included. Ties go to
/// the lowest index.
ArmPair colstim_choose(const ContextMatrix& ctx, const Eigen::VectorXd& theta,
                       const GramState& gram, std::span<const double> eps, double c1,
                       std::span<const std::size_t> active = {}, ColstimScores* scores = nullptr);

/// Draws the truncated perturbations for one round: with probability p_t
/// independent per-arm draws, otherwise one shared draw for every arm.
/// Returns true when the shared (coupled) draw was used.
bool draw_perturbations(const HyperParams& hyper, std::size_t t, std::size_t n, Stream& stream,
                        std::vector<double>& eps);

/// CoLSTIM: uniform random exploration for tau rounds, then perturbed-leader
/// first arm plus optimistic second arm.
class ColstimPolicy final : public Policy {
 public:
  struct Diagnostics {
    bool exploring = true;
    bool coupled = false;
    std::vector<double> eps;
    ColstimScores scores;
  };

  ColstimPolicy(HyperParams hyper, std::size_t n, std::size_t d, std::uint64_t seed);

  ArmPair select(const ContextMatrix& ctx) override;
  void update(const ContextMatrix& ctx, ArmPair pair, int outcome) override;
  std::int64_t estimator_ns() const override { return estimator_.estimator_ns(); }

  /// Completed rounds.
  std::size_t round() const { return round_; }
  const HyperParams& hyper() const { return hyper_; }
  const LinearEstimator& estimator() const { return estimator_; }
  const Eigen::VectorXd& estimate() const { return estimator_.estimate(); }
  const GramState& gram() const { return estimator_.gram(); }
  const Diagnostics& last_diagnostics() const { return diag_; }

 private:
  HyperParams hyper_;
  std::size_t n_;
  Stream stream_;
  LinearEstimator estimator_;
  std::size_t round_ = 0;
  Diagnostics diag_;
};

}  // namespace duelsim
