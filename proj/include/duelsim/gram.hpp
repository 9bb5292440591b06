#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace duelsim {

/// Gram matrix M = ridge*I + sum z z^T of played contrasts, with M^{-1}
/// maintained by Sherman-Morrison updates.
///
/// The inverse is recomputed from scratch every kReinvertInterval updates to
/// bound accumulated rounding drift.
class GramState {
 public:
  static constexpr std::size_t kReinvertInterval = 10000;

  GramState(std::size_t dim, double ridge);

  void rank_one_update(const Eigen::VectorXd& z);

  /// sqrt(x^T M^{-1} x)
  double weighted_norm(const Eigen::VectorXd& x) const;
  double weighted_norm_squared(const Eigen::VectorXd& x) const;

  double min_eigenvalue() const;

  /// max |(M M^{-1} - I)_{ij}|
  double inverse_residual() const;
  /// max |M_{ij} - M_{ji}|
  double asymmetry() const;

  void reinvert();

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  double ridge() const { return ridge_; }
  std::size_t update_count() const { return update_count_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd inverse_;
  double ridge_;
  std::size_t update_count_ = 0;
};

inline GramState gram_init(std::size_t dim, double ridge) { return GramState(dim, ridge); }

}  // namespace duelsim
