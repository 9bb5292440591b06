#include "duelsim/colstim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "duelsim/errors.hpp"

namespace duelsim {

namespace {

std::vector<std::size_t> all_arms(std::size_t n) {
  std::vector<std::size_t> arms(n);
  std::iota(arms.begin(), arms.end(), std::size_t{0});
  return arms;
}

}  // namespace

ArmPair colstim_choose(const ContextMatrix& ctx, const Eigen::VectorXd& theta,
                       const GramState& gram, std::span<const double> eps, double c1,
                       std::span<const std::size_t> active, ColstimScores* scores) {
  const std::size_t n = ctx.arms();
  if (eps.size() != n) throw ParameterError("need one perturbation per arm");
  std::vector<std::size_t> everyone;
  if (active.empty()) {
    everyone = all_arms(n);
    active = everyone;
  }

  const Eigen::MatrixXd& inv = gram.inverse();
  const Eigen::MatrixXd weighted = inv * ctx.columns;  // column i is M^{-1} x_i
  const Eigen::VectorXd utility = ctx.columns.transpose() * theta;
  const Eigen::VectorXd self = ctx.columns.cwiseProduct(weighted).colwise().sum().transpose();

  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  if (scores) {
    scores->first.assign(n, kNaN);
    scores->second.assign(n, kNaN);
  }

  std::size_t first = active.front();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : active) {
    const auto k = static_cast<Eigen::Index>(i);
    const double s = utility(k) + eps[i] * std::sqrt(std::max(0.0, self(k)));
    if (scores) scores->first[i] = s;
    if (s > best) {
      best = s;
      first = i;
    }
  }

  // ||x_i - x_k||^2 = x_i'Ax_i + x_k'Ax_k - 2 x_k'Ax_i
  const auto f = static_cast<Eigen::Index>(first);
  const Eigen::VectorXd cross = ctx.columns.transpose() * weighted.col(f);
  std::size_t second = first;
  best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : active) {
    const auto k = static_cast<Eigen::Index>(i);
    const double width =
        i == first ? 0.0 : std::sqrt(std::max(0.0, self(k) + self(f) - 2.0 * cross(k)));
    const double s = utility(k) - utility(f) + c1 * width;
    if (scores) scores->second[i] = s;
    if (s > best) {
      best = s;
      second = i;
    }
  }
  return {first, second};
}

bool draw_perturbations(const HyperParams& hyper, std::size_t t, std::size_t n, Stream& stream,
                        std::vector<double>& eps) {
  eps.resize(n);
  const bool independent = stream.bernoulli(hyper.coupling_probability(t));
  if (independent) {
    for (auto& e : eps) {
      e = truncate_perturbation(sample_perturbation(hyper.perturbation, stream), hyper.c_thresh);
    }
  } else {
    const double shared =
        truncate_perturbation(sample_perturbation(hyper.perturbation, stream), hyper.c_thresh);
    std::fill(eps.begin(), eps.end(), shared);
  }
  return !independent;
}

ColstimPolicy::ColstimPolicy(HyperParams hyper, std::size_t n, std::size_t d, std::uint64_t seed)
    : hyper_(std::move(hyper)),
      n_(n),
      stream_(seed),
      estimator_(d, hyper_.estimator_mode, hyper_.assumed_model, hyper_.learning_rate,
                 hyper_.ridge, hyper_.mle) {
  if (n < 2) throw ParameterError("CoLSTIM needs at least two arms");
  hyper_.validate();
}

ArmPair ColstimPolicy::select(const ContextMatrix& ctx) {
  const std::size_t t = round_ + 1;
  if (t <= hyper_.tau) {
    diag_.exploring = true;
    return random_distinct_pair(n_, stream_);
  }
  diag_.exploring = false;
  diag_.coupled = draw_perturbations(hyper_, t, n_, stream_, diag_.eps);
  return colstim_choose(ctx, estimator_.estimate(), estimator_.gram(), diag_.eps, hyper_.c1, {},
                        &diag_.scores);
}

void ColstimPolicy::update(const ContextMatrix& ctx, ArmPair pair, int outcome) {
  ++round_;
  DuelObservation obs{round_, pair.first, pair.second, contrast(ctx, pair.first, pair.second),
                      outcome};
  if (round_ < hyper_.tau) {
    estimator_.observe(std::move(obs), false);
  } else {
    // The last exploration round triggers the first full fit.
    estimator_.observe(std::move(obs), true);
  }
}

}  // namespace duelsim
