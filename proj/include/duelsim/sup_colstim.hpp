#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "duelsim/colstim.hpp"
#include "duelsim/policy.hpp"

namespace duelsim {

/// Arms of `active` whose estimated utility is within 2^-stage of the best
/// active arm.
std::vector<std::size_t> eliminate_arms(const Eigen::VectorXd& utilities,
                                        const std::vector<std::size_t>& active, int stage);

/// Sup-CoLSTIM: CoLSTIM embedded in a staged elimination scheme.
///
/// Stages s = 1..S (S = floor(log2 T)) each keep their own estimate and Gram
/// matrix built only from the rounds assigned to them; all stages share the
/// exploration prefix. Each round walks the stages: once every active pair is
/// estimated to within 1/sqrt(T) a CoLSTIM choice is made (the round goes to
/// Psi_0); once all widths are below 2^-s the active set is pruned and the
/// next stage is tried; otherwise a random under-explored pair is played and
/// the round is assigned to stage s.
class SupColstimPolicy final : public Policy {
 public:
  enum class Branch { Explore, Perturbed, Eliminate, Uncertain };

  struct TraceStep {
    int stage;
    Branch branch;
    std::size_t active_arms;
  };

  SupColstimPolicy(HyperParams hyper, std::size_t n, std::size_t d, std::size_t horizon,
                   std::uint64_t seed);

  ArmPair select(const ContextMatrix& ctx) override;
  void update(const ContextMatrix& ctx, ArmPair pair, int outcome) override;
  std::int64_t estimator_ns() const override;

  int stage_count() const { return stage_count_; }
  std::size_t round() const { return round_; }
  /// Adaptive rounds assigned to Psi_s, s = 0..S (exploration prefix excluded).
  const std::vector<std::size_t>& stage_rounds() const { return stage_rounds_; }
  const LinearEstimator& stage(int s) const { return stages_.at(static_cast<std::size_t>(s - 1)); }
  const std::vector<TraceStep>& last_trace() const { return trace_; }
  std::size_t stage_overflows() const { return overflows_; }

 private:
  HyperParams hyper_;
  std::size_t n_;
  std::size_t horizon_;
  int stage_count_;
  Stream stream_;
  std::vector<LinearEstimator> stages_;
  std::vector<std::size_t> stage_rounds_;
  std::size_t round_ = 0;
  int pending_stage_ = -1;  // stage of the round in flight; 0 = Psi_0, -1 = exploration
  std::vector<TraceStep> trace_;
  std::vector<double> eps_;
  std::size_t overflows_ = 0;
};

}  // namespace duelsim
