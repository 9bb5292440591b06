#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "duelsim/errors.hpp"
#include "duelsim/lst_core.hpp"

using namespace duelsim;

namespace {

const ComparisonModel kModels[] = {ComparisonModel::btl(), ComparisonModel::thurstone_mosteller(),
                                   ComparisonModel::exponential_noise(1.0),
                                   ComparisonModel::exponential_noise(0.7)};

// Central difference of comparison_prob.
double fd_prob(const ComparisonModel& m, double x, double h = 1e-5) {
  return (comparison_prob(m, x + h) - comparison_prob(m, x - h)) / (2 * h);
}

std::vector<DuelObservation> random_obs(Stream& s, int count, int d) {
  std::vector<DuelObservation> obs;
  for (int k = 0; k < count; ++k) {
    DuelObservation o;
    o.contrast = Eigen::VectorXd(d);
    for (int c = 0; c < d; ++c) o.contrast(c) = 2.0 * s.uniform() - 1.0;
    o.outcome = s.bernoulli(0.5) ? 1 : 0;
    obs.push_back(o);
  }
  return obs;
}

}  // namespace

TEST_CASE("comparison_prob closed forms") {
  CHECK(comparison_prob(ComparisonModel::btl(), 0.0) == 0.5);
  CHECK(comparison_prob(ComparisonModel::thurstone_mosteller(), 0.0) == 0.5);

  // long-double evaluation of exp(u_i) / (exp(u_i) + exp(u_j)) with u_i - u_j = 1
  const long double e1 = std::exp(1.0L);
  const double btl1 = static_cast<double>(e1 / (e1 + 1.0L));
  CHECK(comparison_prob(ComparisonModel::btl(), 1.0) == doctest::Approx(btl1).epsilon(1e-15));
  CHECK(comparison_prob(ComparisonModel::btl(), 1.0) == doctest::Approx(0.731059).epsilon(1e-6));

  CHECK(comparison_prob(ComparisonModel::exponential_noise(1.0), std::log(2.0)) ==
        doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("comparison_prob rejects non-finite input") {
  CHECK_THROWS_AS(comparison_prob(ComparisonModel::btl(), std::nan("")), std::domain_error);
  CHECK_THROWS_AS(comparison_prob(ComparisonModel::btl(), INFINITY), std::domain_error);
  CHECK_THROWS_AS(comparison_prob({ModelKind::BTL, 0.0}, 0.0), ParameterError);
}

TEST_CASE("comparison_deriv against finite differences") {
  const auto btl = ComparisonModel::btl();
  CHECK(comparison_deriv(btl, 0.0).value == doctest::Approx(fd_prob(btl, 0.0)).epsilon(1e-8));
  CHECK(comparison_deriv(btl, 0.0).value == doctest::Approx(0.25).epsilon(1e-12));

  // F = Phi(x / sqrt 2)  =>  F'(0) = phi(0) / sqrt 2
  const auto tm = ComparisonModel::thurstone_mosteller();
  const double fd = fd_prob(tm, 0.0);
  const double analytic = comparison_deriv(tm, 0.0).value;
  CHECK(std::abs(analytic - fd) / fd <= 1e-6);
  CHECK(analytic == doctest::Approx(0.282095).epsilon(1e-6));

  Stream s(11);
  for (int k = 0; k < 200; ++k) {
    const double x = 20.0 * s.uniform() - 10.0;
    for (const auto& m : kModels) {
      CHECK(comparison_deriv(m, x).value == doctest::Approx(fd_prob(m, x)).epsilon(1e-6));
      CHECK(comparison_deriv(m, x).value == doctest::Approx(comparison_deriv(m, -x).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("ExponentialNoise derivative at the kink is flagged") {
  const auto m = ComparisonModel::exponential_noise(2.0);
  const Derivative at0 = comparison_deriv(m, 0.0);
  CHECK(at0.one_sided);
  CHECK(at0.value == doctest::Approx(0.25));
  CHECK_FALSE(comparison_deriv(m, 0.1).one_sided);
  CHECK_FALSE(comparison_deriv(ComparisonModel::btl(), 0.0).one_sided);
}

TEST_CASE("comparison functions are symmetric and monotone") {
  Stream s(3);
  for (const auto& m : kModels) {
    std::vector<double> xs;
    for (int k = 0; k < 1000; ++k) xs.push_back(20.0 * s.uniform() - 10.0);
    std::sort(xs.begin(), xs.end());
    double prev = 0.0;
    for (double x : xs) {
      const double p = comparison_prob(m, x);
      CHECK(std::abs(p + comparison_prob(m, -x) - 1.0) <= 1e-12);
      CHECK(p >= prev);
      prev = p;
    }
    CHECK(comparison_prob(m, 0.0) == 0.5);
  }
}

TEST_CASE("sample_perturbation moments and determinism") {
  Stream g(2024);
  double sum = 0.0;
  const int draws = 1000000;
  for (int k = 0; k < draws; ++k) sum += sample_perturbation(PerturbationDistribution::gumbel(), g);
  CHECK(std::abs(sum / draws - 0.5772156649) <= 0.01);

  Stream n(2025);
  sum = 0.0;
  for (int k = 0; k < draws; ++k) sum += sample_perturbation(PerturbationDistribution::gaussian(), n);
  CHECK(std::abs(sum / draws) <= 0.01);

  Stream e(2026);
  sum = 0.0;
  for (int k = 0; k < draws; ++k) {
    sum += sample_perturbation(PerturbationDistribution::exponential(2.0), e);
  }
  CHECK(std::abs(sum / draws - 2.0) <= 0.02);

  for (auto dist : {PerturbationDistribution::gumbel(), PerturbationDistribution::gaussian(),
                    PerturbationDistribution::exponential()}) {
    Stream a(77), b(77);
    for (int k = 0; k < 100; ++k) CHECK(sample_perturbation(dist, a) == sample_perturbation(dist, b));
  }

  Stream x(1);
  CHECK_THROWS_AS(sample_perturbation({NoiseKind::Gumbel, 0.0, 0.0}, x), ParameterError);
  CHECK_THROWS_AS(sample_perturbation({NoiseKind::Gaussian, 0.0, -1.0}, x), ParameterError);
}

TEST_CASE("sorting Gumbel-perturbed utilities reproduces BTL") {
  Stream s(99);
  const int trials = 1000000;
  int wins = 0;
  for (int k = 0; k < trials; ++k) {
    const double vi = 1.0 + sample_perturbation(PerturbationDistribution::gumbel(), s);
    const double vj = 0.0 + sample_perturbation(PerturbationDistribution::gumbel(), s);
    wins += vi > vj ? 1 : 0;
  }
  const double p = comparison_prob(ComparisonModel::btl(), 1.0);
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(static_cast<double>(wins) / trials - p) <= 3 * sigma);
}

TEST_CASE("truncate_perturbation") {
  CHECK(truncate_perturbation(5.0, 1.0) == 1.0);
  CHECK(truncate_perturbation(-5.0, 1.0) == -1.0);
  CHECK(truncate_perturbation(0.3, 1.0) == 0.3);
}

TEST_CASE("log_likelihood examples") {
  const auto btl = ComparisonModel::btl();
  Eigen::VectorXd theta(1);
  theta << 0.0;
  std::vector<DuelObservation> obs{{0, 0, 1, Eigen::VectorXd::Ones(1), 1}};
  CHECK(log_likelihood(theta, obs, btl) == doctest::Approx(std::log(0.5)).epsilon(1e-14));

  theta << 1.0;
  const long double e1 = std::exp(1.0L);
  const double oracle = static_cast<double>(std::log(e1 / (e1 + 1.0L)));
  CHECK(log_likelihood(theta, obs, btl) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(log_likelihood(theta, obs, btl) == doctest::Approx(-0.313262).epsilon(1e-6));

  CHECK(log_likelihood(theta, std::vector<DuelObservation>{}, btl) == 0.0);

  // far in the tail the probability floor keeps the value finite
  theta << 100.0;
  obs[0].outcome = 0;
  const double floored = log_likelihood(theta, obs, ComparisonModel::thurstone_mosteller());
  CHECK(std::isfinite(floored));
  CHECK(floored == doctest::Approx(std::log(kProbabilityFloor)));
}

TEST_CASE("log_likelihood_grad examples") {
  const auto btl = ComparisonModel::btl();
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(3, 0.4);
  std::vector<DuelObservation> zero{{0, 0, 0, Eigen::VectorXd::Zero(3), 1}};
  CHECK(log_likelihood_grad(theta, zero, btl).norm() == 0.0);

  Eigen::VectorXd t1 = Eigen::VectorXd::Zero(1);
  std::vector<DuelObservation> one{{0, 0, 1, Eigen::VectorXd::Constant(1, 2.0), 1}};
  CHECK(log_likelihood_grad(t1, one, btl)(0) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(log_likelihood_grad(Eigen::VectorXd::Zero(2), one, btl), ParameterError);
}

TEST_CASE("log_likelihood_grad matches central finite differences") {
  Stream s(5);
  for (const auto& m : kModels) {
    for (int rep = 0; rep < 100; ++rep) {
      const int d = 1 + static_cast<int>(s.index(4));
      const auto obs = random_obs(s, 1 + static_cast<int>(s.index(15)), d);
      Eigen::VectorXd theta(d);
      for (int c = 0; c < d; ++c) theta(c) = 2.0 * s.uniform() - 1.0;

      const Eigen::VectorXd grad = log_likelihood_grad(theta, obs, m);
      Eigen::VectorXd fd(d);
      const double h = 1e-6;
      for (int c = 0; c < d; ++c) {
        Eigen::VectorXd up = theta, dn = theta;
        up(c) += h;
        dn(c) -= h;
        fd(c) = (log_likelihood(up, obs, m) - log_likelihood(dn, obs, m)) / (2 * h);
      }
      const double rel = (grad - fd).norm() / std::max(fd.norm(), 1e-8);
      CHECK(rel <= 1e-5);
    }
  }
}

TEST_CASE("induced models pair noise with comparison functions") {
  CHECK(induced_model(PerturbationDistribution::gumbel()).kind == ModelKind::BTL);
  CHECK(induced_model(PerturbationDistribution::gaussian()).kind == ModelKind::ThurstoneMosteller);
  const auto lap = induced_model(PerturbationDistribution::exponential(0.5));
  CHECK(lap.kind == ModelKind::ExponentialNoise);
  CHECK(lap.scale == 0.5);
  CHECK(parse_noise_kind("normal") == NoiseKind::Gaussian);
  CHECK_THROWS_AS(parse_noise_kind("cauchy"), ParameterError);

  // Gaussian perturbations sorted pairwise follow Thurstone-Mosteller.
  Stream s(8);
  const int trials = 200000;
  int wins = 0;
  for (int k = 0; k < trials; ++k) {
    wins += 0.5 + s.normal() > s.normal() ? 1 : 0;
  }
  const double p = comparison_prob(ComparisonModel::thurstone_mosteller(), 0.5);
  CHECK(std::abs(static_cast<double>(wins) / trials - p) <= 3 * std::sqrt(p * (1 - p) / trials));
}
