#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "duelsim/policy.hpp"

namespace duelsim {

// ---------------------------------------------------------------------------
// MaxInP (maximum-informative pair)
// ---------------------------------------------------------------------------

struct MaxInpParams {
  std::size_t t0 = 0;  // random initialization rounds
  double eta = 1.0;    // confidence width multiplier
  EstimatorMode estimator_mode = EstimatorMode::SGD;
  ComparisonModel model = ComparisonModel::btl();
  double learning_rate = 0.5;
  double ridge = 1e-6;
  MleOptions mle;

  void validate() const;
};

/// t0 = d n, eta = sqrt(d ln T), SGD with rate 1/2, Theta radius sqrt(d).
MaxInpParams default_maxinp_params(std::size_t horizon, std::size_t d, std::size_t n);

/// Arms not confidently beaten by any other arm:
/// { i : <x_i - x_j, theta> + eta ||x_i - x_j|| >= 0 for all j }.
std::vector<std::size_t> promising_set(const ContextMatrix& ctx, const Eigen::VectorXd& theta,
                                       const GramState& gram, double eta);

/// Pair of promising arms with the widest ||x_i - x_j||_{M^-1}; pairs are
/// scanned in lexicographic order (i <= j) and the first maximum wins.
ArmPair maxinp_choose(const ContextMatrix& ctx, const Eigen::VectorXd& theta,
                      const GramState& gram, double eta);

class MaxInpPolicy final : public Policy {
 public:
  MaxInpPolicy(MaxInpParams params, std::size_t n, std::size_t d, std::uint64_t seed);

  ArmPair select(const ContextMatrix& ctx) override;
  void update(const ContextMatrix& ctx, ArmPair pair, int outcome) override;
  std::int64_t estimator_ns() const override { return estimator_.estimator_ns(); }

  const LinearEstimator& estimator() const { return estimator_; }

 private:
  MaxInpParams params_;
  std::size_t n_;
  Stream stream_;
  LinearEstimator estimator_;
  std::size_t round_ = 0;
};

// ---------------------------------------------------------------------------
// Double Thompson Sampling (non-contextual)
// ---------------------------------------------------------------------------

/// Wins-matrix DTS. Candidates for the first arm are the arms with maximal
/// upper Copeland score; among them the arm winning the most Thompson-sampled
/// pairwise duels is chosen. The second arm is the Thompson-sampled strongest
/// challenger of the first among arms whose lower confidence bound against it
/// is at most 1/2. The first arm itself stays eligible, so self-duels occur.
class DtsPolicy final : public Policy {
 public:
  DtsPolicy(std::size_t n, std::uint64_t seed, double alpha = 0.51);

  ArmPair select(const ContextMatrix& ctx) override;
  void update(const ContextMatrix& ctx, ArmPair pair, int outcome) override;

  /// Posterior mean of P(i beats j): (1 + wins_ij) / (2 + wins_ij + wins_ji).
  double posterior_mean(std::size_t i, std::size_t j) const;
  std::size_t wins(std::size_t i, std::size_t j) const { return wins_[i * n_ + j]; }

 private:
  std::size_t n_;
  double alpha_;
  Stream stream_;
  std::vector<std::size_t> wins_;  // row-major n x n, wins_[i*n+j] = times i beat j
  std::size_t round_ = 0;
};

// ---------------------------------------------------------------------------
// Self-Sparring with independent Beta priors (non-contextual)
// ---------------------------------------------------------------------------

class SelfSparringPolicy final : public Policy {
 public:
  SelfSparringPolicy(std::size_t n, std::uint64_t seed);

  ArmPair select(const ContextMatrix& ctx) override;
  void update(const ContextMatrix& ctx, ArmPair pair, int outcome) override;

  /// Overrides the Beta(1 + wins, 1 + losses) counters of one arm.
  void set_counts(std::size_t arm, double wins, double losses);
  double arm_wins(std::size_t arm) const { return wins_[arm]; }
  double arm_losses(std::size_t arm) const { return losses_[arm]; }

 private:
  std::size_t n_;
  Stream stream_;
  std::vector<double> wins_;
  std::vector<double> losses_;
  std::vector<double> draws_;
};

// ---------------------------------------------------------------------------
// Uniform random pairs
// ---------------------------------------------------------------------------

ArmPair random_select(std::size_t n, Stream& stream);

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(std::size_t n, std::uint64_t seed);

  ArmPair select(const ContextMatrix& ctx) override;
  void update(const ContextMatrix&, ArmPair, int) override {}

 private:
  std::size_t n_;
  Stream stream_;
};

}  // namespace duelsim
