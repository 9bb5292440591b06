#include "duelsim/sup_colstim.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "duelsim/errors.hpp"

namespace duelsim {

std::vector<std::size_t> eliminate_arms(const Eigen::VectorXd& utilities,
                                        const std::vector<std::size_t>& active, int stage) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i : active) top = std::max(top, utilities(static_cast<Eigen::Index>(i)));
  const double slack = std::ldexp(1.0, -stage);
  std::vector<std::size_t> kept;
  for (std::size_t i : active) {
    if (utilities(static_cast<Eigen::Index>(i)) + slack >= top) kept.push_back(i);
  }
  return kept;
}

SupColstimPolicy::SupColstimPolicy(HyperParams hyper, std::size_t n, std::size_t d,
                                   std::size_t horizon, std::uint64_t seed)
    : hyper_(std::move(hyper)), n_(n), horizon_(horizon), stage_count_(0), stream_(seed) {
  if (n < 2) throw ParameterError("Sup-CoLSTIM needs at least two arms");
  if (horizon < 2) throw ParameterError("Sup-CoLSTIM needs a horizon of at least 2");
  hyper_.validate();
  stage_count_ = static_cast<int>(std::floor(std::log2(static_cast<double>(horizon))));
  stages_.reserve(static_cast<std::size_t>(stage_count_));
  for (int s = 0; s < stage_count_; ++s) {
    stages_.emplace_back(d, hyper_.estimator_mode, hyper_.assumed_model, hyper_.learning_rate,
                         hyper_.ridge, hyper_.mle);
  }
  stage_rounds_.assign(static_cast<std::size_t>(stage_count_) + 1, 0);
}

std::int64_t SupColstimPolicy::estimator_ns() const {
  std::int64_t total = 0;
  for (const auto& s : stages_) total += s.estimator_ns();
  return total;
}

ArmPair SupColstimPolicy::select(const ContextMatrix& ctx) {
  trace_.clear();
  const std::size_t t = round_ + 1;
  if (t <= hyper_.tau) {
    pending_stage_ = -1;
    trace_.push_back({0, Branch::Explore, n_});
    return random_distinct_pair(n_, stream_);
  }

  const double final_width = 1.0 / std::sqrt(static_cast<double>(horizon_));
  std::vector<std::size_t> active(n_);
  std::iota(active.begin(), active.end(), std::size_t{0});

  for (int s = 1;; ++s) {
    bool forced = false;
    if (s > stage_count_) {
      // Cannot happen when 2^-S <= 1/sqrt(T); kept as a guard for tiny horizons.
      if (overflows_++ == 0) {
        std::clog << "sup-colstim: stage walk passed S=" << stage_count_
                  << "; falling back to the perturbed choice\n";
      }
      s = stage_count_;
      forced = true;
    }
    const LinearEstimator& est = stages_[static_cast<std::size_t>(s - 1)];
    const Eigen::MatrixXd& inv = est.gram().inverse();
    const Eigen::MatrixXd weighted = inv * ctx.columns;
    const Eigen::MatrixXd q = ctx.columns.transpose() * weighted;

    auto width = [&](std::size_t i, std::size_t j) {
      if (i == j) return 0.0;
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      return hyper_.c1 * std::sqrt(std::max(0.0, q(a, a) + q(b, b) - 2.0 * q(a, b)));
    };
    double widest = 0.0;
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        widest = std::max(widest, width(active[x], active[y]));
      }
    }

    if (forced || widest <= final_width) {
      trace_.push_back({s, Branch::Perturbed, active.size()});
      draw_perturbations(hyper_, t, n_, stream_, eps_);
      pending_stage_ = 0;
      return colstim_choose(ctx, est.estimate(), est.gram(), eps_, hyper_.c1, active);
    }
    const double stage_width = std::ldexp(1.0, -s);
    if (widest <= stage_width) {
      trace_.push_back({s, Branch::Eliminate, active.size()});
      const Eigen::VectorXd utilities = ctx.columns.transpose() * est.estimate();
      active = eliminate_arms(utilities, active, s);
      continue;
    }
    trace_.push_back({s, Branch::Uncertain, active.size()});
    std::vector<ArmPair> candidates;
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        if (width(active[x], active[y]) > stage_width) candidates.push_back({active[x], active[y]});
      }
    }
    pending_stage_ = s;
    return candidates[stream_.index(candidates.size())];
  }
}

void SupColstimPolicy::update(const ContextMatrix& ctx, ArmPair pair, int outcome) {
  ++round_;
  DuelObservation obs{round_, pair.first, pair.second, contrast(ctx, pair.first, pair.second),
                      outcome};
  if (round_ <= hyper_.tau) {
    const bool last = round_ == hyper_.tau;
    for (auto& s : stages_) s.observe(obs, last);
    return;
  }
  if (pending_stage_ < 0) throw ParameterError("update without a matching select");
  ++stage_rounds_[static_cast<std::size_t>(pending_stage_)];
  if (pending_stage_ > 0) {
    stages_[static_cast<std::size_t>(pending_stage_ - 1)].observe(std::move(obs), true);
  }
  pending_stage_ = -1;
}

}  // namespace duelsim
