#include "todatw/fredholm.hpp"

#include <cmath>
#include <limits>

#include "todatw/error.hpp"
#include "todatw/hermite.hpp"

namespace todatw {

ResolvedFunction::ResolvedFunction(std::function<double(double)> g,
                                   std::function<double(double)> dg, Eigen::VectorXd values,
                                   Eigen::VectorXd coeffs)
    : g_(std::move(g)), dg_(std::move(dg)), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

double ResolvedFunction::operator()(double x) const {
  const auto phis = hermite_functions(static_cast<int>(coeffs_.size()), x);
  double sum = g_(x);
  for (Eigen::Index k = 0; k < coeffs_.size(); ++k) sum += coeffs_[k] * phis[k];
  return sum;
}

double ResolvedFunction::derivative(double x) const {
  if (!dg_) throw Error(ErrorKind::InvalidArgument, "derivative of the source term not supplied");
  const int count = static_cast<int>(coeffs_.size());
  const auto phis = hermite_functions(count, x);
  double sum = dg_(x);
  for (int k = 0; k < count; ++k) {
    const double d = -x * phis[k] + (k > 0 ? std::sqrt(2.0 * k) * phis[k - 1] : 0.0);
    sum += coeffs_[k] * d;
  }
  return sum;
}

NystromSystem NystromSystem::build(int n, const IntervalSet& set, const NystromOptions& options) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "matrix size n must be >= 1");
  NystromSystem sys;
  sys.n_ = n;
  sys.set_ = set;
  sys.truncation_ = options.truncation_L > 0.0 ? options.truncation_L : default_truncation(n, set);
  if (sys.truncation_ <= set.max_abs_finite_endpoint()) {
    throw Error(ErrorKind::InvalidArgument, "truncation must exceed every finite endpoint");
  }

  PanelScheme scheme;
  scheme.points_per_panel = options.points_per_panel;
  scheme.truncation_L = sys.truncation_;
  scheme.max_panel_width = options.max_panel_width;
  const auto grid = composite_nodes(complement(set), scheme);

  const auto size = static_cast<Eigen::Index>(grid.nodes.size());
  sys.nodes_ = Eigen::Map<const Eigen::VectorXd>(grid.nodes.data(), size);
  sys.weights_ = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), size);
  sys.sqrt_weights_ = sys.weights_.cwiseSqrt();
  sys.basis_.resize(size, n);
  for (Eigen::Index i = 0; i < size; ++i) {
    const auto phis = hermite_functions(n, sys.nodes_[i]);
    for (int k = 0; k < n; ++k) sys.basis_(i, k) = phis[k];
  }
  // Rank-n product form of the kernel; avoids the cancellation of the
  // divided difference near the diagonal.
  sys.kernel_ = sys.basis_ * sys.basis_.transpose();
  const Eigen::MatrixXd scaled = sys.sqrt_weights_.asDiagonal() * sys.basis_;
  sys.symmetrized_ = scaled * scaled.transpose();

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(size, size) - sys.symmetrized_;
  auto factor = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(a);
  if (factor->info() == Eigen::Success) {
    const Eigen::MatrixXd& l = factor->matrixLLT();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < size; ++i) log_det += 2.0 * std::log(l(i, i));
    sys.chol_log_det_ = log_det;
  } else {
    sys.chol_log_det_ = -std::numeric_limits<double>::infinity();
  }
  sys.factor_ = std::move(factor);
  return sys;
}

void NystromSystem::require_solvable() const {
  const double det = std::exp(chol_log_det_);
  if (!(det > kMinResolventDet)) {
    throw Error(ErrorKind::IllConditioned,
                "det(I - K) = " + format_general(det) + " is too close to the singular limit", det);
  }
}

ResolvedFunction NystromSystem::resolve(std::function<double(double)> g,
                                        std::function<double(double)> dg) const {
  if (!g) throw Error(ErrorKind::InvalidArgument, "resolve needs a source function");
  const auto size = nodes_.size();
  Eigen::VectorXd values(size);
  for (Eigen::Index i = 0; i < size; ++i) values[i] = g(nodes_[i]);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n_);
  if (size > 0) {
    require_solvable();
    const Eigen::VectorXd rhs = sqrt_weights_.cwiseProduct(values);
    const Eigen::VectorXd scaled = factor_->solve(rhs);
    values = scaled.cwiseQuotient(sqrt_weights_);
    coeffs = basis_.transpose() * weights_.cwiseProduct(values);
  }
  return ResolvedFunction(std::move(g), std::move(dg), std::move(values), std::move(coeffs));
}

Eigen::MatrixXd NystromSystem::resolvent_grid() const {
  const auto size = nodes_.size();
  if (size == 0) return {};
  require_solvable();
  // (I - K W)^{-1} = W^{-1/2} (I - S)^{-1} W^{1/2}
  Eigen::MatrixXd inv_s = factor_->solve(Eigen::MatrixXd::Identity(size, size));
  Eigen::MatrixXd inv = sqrt_weights_.cwiseInverse().asDiagonal() * inv_s * sqrt_weights_.asDiagonal();
  inv.diagonal().array() -= 1.0;
  return inv;
}

double fredholm_log_det(const NystromSystem& system) {
  const auto size = system.size();
  if (size == 0) return 0.0;
  const auto& s = system.symmetrized();
  if (s.trace() <= 0.5) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(size, size) - s;
    const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant();
    return std::log(det);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) log_det += std::log1p(-eig.eigenvalues()[i]);
  return log_det;
}

double fredholm_det(const NystromSystem& system) { return std::exp(fredholm_log_det(system)); }

}  // namespace todatw
