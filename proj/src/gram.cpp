#include "duelsim/gram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "duelsim/errors.hpp"

namespace duelsim {

GramState::GramState(std::size_t dim, double ridge) : ridge_(ridge) {
  if (dim == 0) throw ParameterError("Gram matrix dimension must be at least 1");
  if (!(ridge > 0.0)) throw ParameterError("ridge must be positive, got " + std::to_string(ridge));
  const auto d = static_cast<Eigen::Index>(dim);
  matrix_ = ridge * Eigen::MatrixXd::Identity(d, d);
  inverse_ = (1.0 / ridge) * Eigen::MatrixXd::Identity(d, d);
}

void GramState::rank_one_update(const Eigen::VectorXd& z) {
  if (z.size() != matrix_.rows()) throw ParameterError("contrast has wrong dimension");
  ++update_count_;
  if (z.squaredNorm() == 0.0) return;

  matrix_.noalias() += z * z.transpose();
  if (update_count_ % kReinvertInterval == 0) {
    reinvert();
    return;
  }
  const Eigen::VectorXd u = inverse_ * z;
  const double denom = 1.0 + z.dot(u);
  inverse_.noalias() -= (u * u.transpose()) / denom;
  inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
}

double GramState::weighted_norm_squared(const Eigen::VectorXd& x) const {
  return std::max(0.0, x.dot(inverse_ * x));
}

double GramState::weighted_norm(const Eigen::VectorXd& x) const {
  return std::sqrt(weighted_norm_squared(x));
}

double GramState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double GramState::inverse_residual() const {
  const auto d = matrix_.rows();
  return (matrix_ * inverse_ - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
}

double GramState::asymmetry() const {
  return (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
}

void GramState::reinvert() {
  Eigen::LLT<Eigen::MatrixXd> llt(matrix_);
  const auto d = matrix_.rows();
  inverse_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
  inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
}

}  // namespace duelsim
