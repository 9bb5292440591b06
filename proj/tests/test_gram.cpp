#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "duelsim/errors.hpp"
#include "duelsim/gram.hpp"
#include "duelsim/random.hpp"

using namespace duelsim;

namespace {

Eigen::VectorXd random_vector(Stream& s, int d, double scale = 1.0) {
  Eigen::VectorXd v(d);
  for (int k = 0; k < d; ++k) v(k) = scale * (2.0 * s.uniform() - 1.0);
  return v;
}

}  // namespace

TEST_CASE("gram_init") {
  const GramState g = gram_init(2, 1.0);
  CHECK(g.matrix().isApprox(Eigen::Matrix2d::Identity()));
  CHECK(g.inverse().isApprox(Eigen::Matrix2d::Identity()));
  CHECK(g.update_count() == 0);

  const GramState small = gram_init(3, 1e-6);
  CHECK((small.matrix() - 1e-6 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(small.inverse_residual() <= 1e-12);
  CHECK(small.min_eigenvalue() == doctest::Approx(1e-6).epsilon(1e-9));

  CHECK_THROWS_AS(gram_init(0, 1.0), ParameterError);
  CHECK_THROWS_AS(gram_init(2, 0.0), ParameterError);
}

TEST_CASE("rank_one_update on the identity") {
  GramState g = gram_init(2, 1.0);
  g.rank_one_update(Eigen::Vector2d(1.0, 0.0));
  // direct 2x2 inversion of diag(2, 1)
  Eigen::Matrix2d expected_inv;
  expected_inv << 0.5, 0.0, 0.0, 1.0;
  CHECK((g.matrix() - Eigen::Vector2d(2.0, 1.0).asDiagonal().toDenseMatrix()).norm() == 0.0);
  CHECK((g.inverse() - expected_inv).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(g.update_count() == 1);

  const Eigen::Matrix2d before = g.matrix();
  g.rank_one_update(Eigen::Vector2d::Zero());
  CHECK(g.matrix() == before);
  CHECK(g.update_count() == 2);

  CHECK_THROWS_AS(g.rank_one_update(Eigen::Vector3d::Ones()), ParameterError);
}

TEST_CASE("Sherman-Morrison inverse tracks direct inversion") {
  Stream s(1);
  GramState g = gram_init(8, 1e-6);
  Eigen::MatrixXd rebuilt = 1e-6 * Eigen::MatrixXd::Identity(8, 8);
  double last_min_eig = g.min_eigenvalue();
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd z = random_vector(s, 8, 2.0 / std::sqrt(8.0));
    g.rank_one_update(z);
    rebuilt += z * z.transpose();
    if (k % 50 == 0 || k == 999) {
      const double eig = g.min_eigenvalue();
      CHECK(eig >= last_min_eig * (1 - 1e-9));
      last_min_eig = eig;
    }
  }
  const Eigen::MatrixXd direct = rebuilt.inverse();
  CHECK((g.inverse() - direct).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((g.matrix() - rebuilt).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(g.asymmetry() <= 1e-10);
  CHECK(g.inverse_residual() <= 1e-8);
}

TEST_CASE("periodic reinversion keeps the inverse exact") {
  Stream s(2);
  GramState g = gram_init(3, 1.0);
  for (std::size_t k = 0; k < GramState::kReinvertInterval + 5; ++k) {
    g.rank_one_update(random_vector(s, 3, 0.5));
  }
  CHECK(g.inverse_residual() <= 1e-10);
  CHECK(g.update_count() == GramState::kReinvertInterval + 5);
}

TEST_CASE("weighted_norm") {
  GramState id = gram_init(2, 1.0);
  CHECK(id.weighted_norm(Eigen::Vector2d(3.0, 4.0)) == doctest::Approx(5.0));
  CHECK(id.weighted_norm(Eigen::Vector2d::Zero()) == 0.0);

  GramState g = gram_init(2, 1.0);
  g.rank_one_update(Eigen::Vector2d(std::sqrt(3.0), 0.0));  // diag(4, 1)
  CHECK(g.weighted_norm(Eigen::Vector2d(2.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weighted_norm satisfies the reverse triangle inequality") {
  Stream s(4);
  GramState g = gram_init(4, 0.1);
  for (int k = 0; k < 20; ++k) g.rank_one_update(random_vector(s, 4));
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd x = random_vector(s, 4), y = random_vector(s, 4);
    CHECK(std::abs(g.weighted_norm(x) - g.weighted_norm(y)) <= g.weighted_norm(x - y) + 1e-12);
  }
}

TEST_CASE("min_eigenvalue") {
  GramState diag = gram_init(2, 2.0);
  diag.rank_one_update(Eigen::Vector2d(0.0, std::sqrt(3.0)));  // diag(2, 5)
  CHECK(diag.min_eigenvalue() == doctest::Approx(2.0).epsilon(1e-6));

  GramState g = gram_init(2, 1.0);
  g.rank_one_update(Eigen::Vector2d(1.0, 1.0));  // [[2,1],[1,2]]
  // characteristic polynomial (2 - l)^2 - 1 = 0  =>  l = 1, 3
  CHECK(g.min_eigenvalue() == doctest::Approx(1.0).epsilon(1e-6));

  CHECK(gram_init(5, 0.3).min_eigenvalue() == doctest::Approx(0.3).epsilon(1e-6));
}
