#include "duelsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "duelsim/errors.hpp"

namespace duelsim {

void MaxInpParams::validate() const {
  if (!(eta >= 0.0)) throw ParameterError("MaxInP eta must be non-negative");
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be positive");
  if (!(ridge > 0.0)) throw ParameterError("ridge must be positive");
  mle.validate();
}

MaxInpParams default_maxinp_params(std::size_t horizon, std::size_t d, std::size_t n) {
  if (horizon < 2) throw ParameterError("horizon must be at least 2");
  MaxInpParams p;
  p.t0 = d * n;
  p.eta = std::sqrt(static_cast<double>(d) * std::log(static_cast<double>(horizon)));
  p.mle = default_mle_options(d);
  return p;
}

namespace {

// Gram of contexts under M^{-1}: q(i,j) = x_i' M^{-1} x_j
Eigen::MatrixXd weighted_gram(const ContextMatrix& ctx, const GramState& gram) {
  return ctx.columns.transpose() * (gram.inverse() * ctx.columns);
}

double pair_width(const Eigen::MatrixXd& q, Eigen::Index i, Eigen::Index j) {
  if (i == j) return 0.0;
  return std::sqrt(std::max(0.0, q(i, i) + q(j, j) - 2.0 * q(i, j)));
}

std::vector<std::size_t> promising_from(const Eigen::VectorXd& utility, const Eigen::MatrixXd& q,
                                        double eta) {
  const auto n = utility.size();
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool keep = true;
    for (Eigen::Index j = 0; j < n && keep; ++j) {
      keep = utility(i) - utility(j) + eta * pair_width(q, i, j) >= 0.0;
    }
    if (keep) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace

std::vector<std::size_t> promising_set(const ContextMatrix& ctx, const Eigen::VectorXd& theta,
                                       const GramState& gram, double eta) {
  return promising_from(ctx.columns.transpose() * theta, weighted_gram(ctx, gram), eta);
}

ArmPair maxinp_choose(const ContextMatrix& ctx, const Eigen::VectorXd& theta,
                      const GramState& gram, double eta) {
  const Eigen::MatrixXd q = weighted_gram(ctx, gram);
  std::vector<std::size_t> candidates = promising_from(ctx.columns.transpose() * theta, q, eta);
  if (candidates.empty()) {
    std::clog << "maxinp: empty promising set; using all arms\n";
    candidates.resize(ctx.arms());
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  }
  ArmPair best{candidates.front(), candidates.front()};
  double widest = -1.0;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t b = a; b < candidates.size(); ++b) {
      const double w = pair_width(q, static_cast<Eigen::Index>(candidates[a]),
                                  static_cast<Eigen::Index>(candidates[b]));
      if (w > widest) {
        widest = w;
        best = {candidates[a], candidates[b]};
      }
    }
  }
  return best;
}

MaxInpPolicy::MaxInpPolicy(MaxInpParams params, std::size_t n, std::size_t d, std::uint64_t seed)
    : params_(std::move(params)),
      n_(n),
      stream_(seed),
      estimator_(d, params_.estimator_mode, params_.model, params_.learning_rate, params_.ridge,
                 params_.mle) {
  if (n < 2) throw ParameterError("MaxInP needs at least two arms");
  params_.validate();
}

ArmPair MaxInpPolicy::select(const ContextMatrix& ctx) {
  if (round_ + 1 <= params_.t0) return random_distinct_pair(n_, stream_);
  return maxinp_choose(ctx, estimator_.estimate(), estimator_.gram(), params_.eta);
}

void MaxInpPolicy::update(const ContextMatrix& ctx, ArmPair pair, int outcome) {
  ++round_;
  DuelObservation obs{round_, pair.first, pair.second, contrast(ctx, pair.first, pair.second),
                      outcome};
  estimator_.observe(std::move(obs), round_ >= params_.t0);
}

// ---------------------------------------------------------------------------

DtsPolicy::DtsPolicy(std::size_t n, std::uint64_t seed, double alpha)
    : n_(n), alpha_(alpha), stream_(seed), wins_(n * n, 0) {
  if (n < 2) throw ParameterError("DTS needs at least two arms");
  if (!(alpha > 0.5)) throw ParameterError("DTS alpha must exceed 1/2");
}

double DtsPolicy::posterior_mean(std::size_t i, std::size_t j) const {
  const double w = static_cast<double>(wins(i, j));
  const double l = static_cast<double>(wins(j, i));
  return (1.0 + w) / (2.0 + w + l);
}

ArmPair DtsPolicy::select(const ContextMatrix&) {
  const std::size_t t = round_ + 1;
  const double log_t = std::log(static_cast<double>(t));

  // Confidence bounds with the convention x/0 := 1.
  auto bounds = [&](std::size_t i, std::size_t j) -> std::pair<double, double> {
    if (i == j) return {0.5, 0.5};
    const double w = static_cast<double>(wins(i, j));
    const double total = w + static_cast<double>(wins(j, i));
    if (total == 0.0) return {0.0, 2.0};
    const double mean = w / total;
    const double radius = std::sqrt(alpha_ * log_t / total);
    return {mean - radius, mean + radius};
  };

  // Upper Copeland scores.
  std::vector<std::size_t> copeland(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j && bounds(i, j).second > 0.5) ++copeland[i];
    }
  }
  const std::size_t top = *std::max_element(copeland.begin(), copeland.end());

  // First Thompson sample over all pairs i < j.
  std::vector<double> theta(n_ * n_, 0.5);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double s = stream_.beta(1.0 + static_cast<double>(wins(i, j)),
                                    1.0 + static_cast<double>(wins(j, i)));
      theta[i * n_ + j] = s;
      theta[j * n_ + i] = 1.0 - s;
    }
  }
  std::vector<std::size_t> leaders;
  std::size_t most = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (copeland[i] != top) continue;
    std::size_t beaten = 0;
    for (std::size_t j = 0; j < n_; ++j) beaten += theta[i * n_ + j] > 0.5 ? 1 : 0;
    if (leaders.empty() || beaten > most) {
      leaders.assign(1, i);
      most = beaten;
    } else if (beaten == most) {
      leaders.push_back(i);
    }
  }
  const std::size_t first = leaders[stream_.index(leaders.size())];

  // Second Thompson sample against the first arm.
  std::vector<std::size_t> challengers;
  double strongest = -1.0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (bounds(i, first).first > 0.5) continue;
    const double s = i == first ? 0.5
                                : stream_.beta(1.0 + static_cast<double>(wins(i, first)),
                                               1.0 + static_cast<double>(wins(first, i)));
    if (s > strongest) {
      strongest = s;
      challengers.assign(1, i);
    } else if (s == strongest) {
      challengers.push_back(i);
    }
  }
  const std::size_t second = challengers[stream_.index(challengers.size())];
  return {first, second};
}

void DtsPolicy::update(const ContextMatrix&, ArmPair pair, int outcome) {
  ++round_;
  if (pair.first == pair.second) return;
  if (outcome == 1) {
    ++wins_[pair.first * n_ + pair.second];
  } else {
    ++wins_[pair.second * n_ + pair.first];
  }
}

// ---------------------------------------------------------------------------

SelfSparringPolicy::SelfSparringPolicy(std::size_t n, std::uint64_t seed)
    : n_(n), stream_(seed), wins_(n, 0.0), losses_(n, 0.0), draws_(n, 0.0) {
  if (n < 2) throw ParameterError("Self-Sparring needs at least two arms");
}

void SelfSparringPolicy::set_counts(std::size_t arm, double wins, double losses) {
  wins_.at(arm) = wins;
  losses_.at(arm) = losses;
}

ArmPair SelfSparringPolicy::select(const ContextMatrix&) {
  for (std::size_t i = 0; i < n_; ++i) draws_[i] = stream_.beta(1.0 + wins_[i], 1.0 + losses_[i]);
  std::size_t first = 0;
  for (std::size_t i = 1; i < n_; ++i) {
    if (draws_[i] > draws_[first]) first = i;
  }
  std::size_t second = first == 0 ? 1 : 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i != first && draws_[i] > draws_[second]) second = i;
  }
  return {first, second};
}

void SelfSparringPolicy::update(const ContextMatrix&, ArmPair pair, int outcome) {
  const std::size_t winner = outcome == 1 ? pair.first : pair.second;
  const std::size_t loser = outcome == 1 ? pair.second : pair.first;
  wins_[winner] += 1.0;
  losses_[loser] += 1.0;
}

// ---------------------------------------------------------------------------

ArmPair random_select(std::size_t n, Stream& stream) { return random_distinct_pair(n, stream); }

RandomPolicy::RandomPolicy(std::size_t n, std::uint64_t seed) : n_(n), stream_(seed) {
  if (n < 2) throw ParameterError("need at least two arms");
}

ArmPair RandomPolicy::select(const ContextMatrix&) { return random_select(n_, stream_); }

}  // namespace duelsim
