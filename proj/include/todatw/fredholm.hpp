#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "todatw/domain.hpp"
#include "todatw/numerics.hpp"

namespace todatw {

struct NystromOptions {
  int points_per_panel = 48;
  /// <= 0 selects default_truncation(n, J).
  double truncation_L = 0.0;
  double max_panel_width = 8.0;
};

/// Smallest determinant for which resolvent solves are attempted.
inline constexpr double kMinResolventDet = 1e-12;

/// A function of x solving (I - K) f = g: node values plus the Nystrom
/// interpolant f(x) = g(x) + sum_j w_j K(x, x_j) f(x_j). Because K has rank n
/// the interpolant collapses to g(x) + sum_k c_k phi_k(x).
class ResolvedFunction {
 public:
  ResolvedFunction(std::function<double(double)> g, std::function<double(double)> dg,
                   Eigen::VectorXd values, Eigen::VectorXd coeffs);

  const Eigen::VectorXd& node_values() const noexcept { return values_; }
  double operator()(double x) const;
  /// Requires the derivative of g to have been supplied.
  double derivative(double x) const;

 private:
  std::function<double(double)> g_;
  std::function<double(double)> dg_;
  Eigen::VectorXd values_;
  Eigen::VectorXd coeffs_;
};

/// Nystrom discretisation of K_n^J = K_n(x, y) chi_{J^c}(y) on the truncated
/// complement of J. Immutable after build.
class NystromSystem {
 public:
  static NystromSystem build(int n, const IntervalSet& set, const NystromOptions& options = {});

  int n() const noexcept { return n_; }
  const IntervalSet& set() const noexcept { return set_; }
  double truncation() const noexcept { return truncation_; }
  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  /// phi_k(x_i), one row per node.
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  /// K_n(x_i, x_j).
  const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }
  /// sqrt(w_i) K_ij sqrt(w_j).
  const Eigen::MatrixXd& symmetrized() const noexcept { return symmetrized_; }

  /// log det(I - S) from the Cholesky factor; -inf when I - S is not
  /// numerically positive definite.
  double cholesky_log_det() const noexcept { return chol_log_det_; }

  /// Solves (I - K) f = g. Throws Error(IllConditioned) carrying the
  /// determinant when det(I - K) <= kMinResolventDet.
  ResolvedFunction resolve(std::function<double(double)> g,
                           std::function<double(double)> dg = {}) const;

  /// Grid resolvent R with (I + R)(I - K W) = I, K W acting on node values.
  Eigen::MatrixXd resolvent_grid() const;

 private:
  void require_solvable() const;

  int n_ = 0;
  IntervalSet set_;
  double truncation_ = 0.0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd sqrt_weights_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd kernel_;
  Eigen::MatrixXd symmetrized_;
  std::shared_ptr<const Eigen::LLT<Eigen::MatrixXd>> factor_;
  double chol_log_det_ = 0.0;
};

/// det(I - K_n^J) = P(all n eigenvalues lie in J).
double fredholm_det(const NystromSystem& system);
/// log det(I - K_n^J). Uses exp-sum of log(1 - lambda) from a symmetric
/// eigendecomposition when trace S > 0.5 (some eigenvalue may exceed 0.5),
/// LU otherwise.
double fredholm_log_det(const NystromSystem& system);

}  // namespace todatw
