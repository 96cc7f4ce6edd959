#include "todatw/tau.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "todatw/error.hpp"
#include "todatw/hermite.hpp"

namespace todatw {

namespace {

// -log of the squared leading coefficient of phi_k: log(k! sqrt(pi) / 2^k).
double log_inverse_leading_sq(int k) {
  return std::lgamma(k + 1.0) + 0.5 * std::log(std::numbers::pi) - k * std::numbers::ln2;
}

}  // namespace

TauTable TauTable::build(int n_max, const IntervalSet& set, const Times& t,
                         const TauOptions& options) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be nonnegative");
  check_weight_integrable(set, t);
  TauTable table;
  table.set_ = set;
  table.times_ = t;
  const int dim = n_max + 1;
  table.log_tau_.assign(dim + 1, 0.0);
  if (set.empty()) {
    for (int m = 1; m <= dim; ++m) table.log_tau_[m] = -std::numeric_limits<double>::infinity();
    return table;
  }

  PanelScheme scheme;
  scheme.points_per_panel = options.points_per_panel;
  scheme.max_panel_width = options.max_panel_width;
  const double base_L =
      options.truncation_L > 0.0 ? options.truncation_L : default_truncation(dim, set);
  scheme.truncation_L = options.deform_truncation ? deformed_truncation(base_L, t) : base_L;
  const auto grid = composite_nodes(set, scheme);

  // Extended precision for the sum and the factorisation: only the weight
  // moves with t, so rounding here is what time differences amplify.
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Mat gram = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const long double x = grid.nodes[i];
    const long double deform = std::exp(x * (t.t1 + x * (t.t2 + x * t.t3)));
    const auto phis = hermite_functions(dim, grid.nodes[i]);
    const long double w = grid.weights[i] * deform;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b <= a; ++b) gram(a, b) += w * phis[a] * phis[b];
    }
  }
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();

  const Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::EvaluationError,
                "Gram matrix is not numerically positive definite on " + set.to_string());
  }
  const Mat& l = llt.matrixLLT();
  double acc = 0.0;
  for (int m = 1; m <= dim; ++m) {
    acc += 2.0 * static_cast<double>(std::log(l(m - 1, m - 1))) + log_inverse_leading_sq(m - 1);
    table.log_tau_[m] = acc;
  }
  return table;
}

double TauTable::log_tau(int n) const {
  if (n < 0 || n >= static_cast<int>(log_tau_.size())) {
    throw Error(ErrorKind::InvalidArgument, "tau index " + std::to_string(n) + " outside table");
  }
  return log_tau_[n];
}

double TauTable::tau(int n) const { return std::exp(log_tau(n)); }

double TauTable::Q(int n) const { return std::exp(log_tau(n + 1) - log_tau(n)); }

double TauTable::P(int n) const {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "P_n needs n >= 1");
  return std::exp(log_tau(n - 1) - log_tau(n));
}

double log_tau_hankel(int n, const IntervalSet& set, const Times& t, const TauOptions& options) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "n must be nonnegative");
  if (n == 0) return 0.0;
  return TauTable::build(n - 1, set, t, options).log_tau(n);
}

double tau_hankel(int n, const IntervalSet& set, const Times& t, const TauOptions& options) {
  return std::exp(log_tau_hankel(n, set, t, options));
}

double log_tau_closed_form(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "closed form needs n >= 1");
  double acc = 0.5 * n * std::log(std::numbers::pi) - 0.5 * n * (n - 1) * std::numbers::ln2;
  for (int j = 1; j < n; ++j) acc += std::lgamma(j + 1.0);
  return acc;
}

double tau_closed_form(int n) { return std::exp(log_tau_closed_form(n)); }

TauRatios tau_ratios(int n, const IntervalSet& set, const TauOptions& options) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "tau ratios need n >= 1");
  const auto table = TauTable::build(n, set, {}, options);
  return {table.Q(n), table.P(n)};
}

double gap_probability_hankel(int n, const IntervalSet& set, const TauOptions& options) {
  const auto on_set = TauTable::build(n, set, {}, options);
  const auto full = TauTable::build(n, IntervalSet::real_line(), {}, options);
  return std::exp(on_set.log_tau(n) - full.log_tau(n));
}

double time_derivative(int n, const IntervalSet& set, TauQuantity quantity, TimeDerivative which,
                       double h, const TauOptions& options) {
  if (!(h >= 1e-6 && h <= 1e-1)) {
    throw Error(ErrorKind::InvalidStep, "time step must lie in [1e-6, 1e-1]");
  }
  if (n < 0 || (quantity == TauQuantity::LogP && n < 1)) {
    throw Error(ErrorKind::InvalidArgument, "invalid n for the requested tau quantity");
  }
  // One layout for every stencil point, sized for the widest deformation.
  TauOptions pinned = options;
  const double base_L =
      options.truncation_L > 0.0 ? options.truncation_L : default_truncation(n + 2, set);
  pinned.truncation_L = deformed_truncation(base_L, Times{2.0 * h, 2.0 * h, 0.0});
  pinned.deform_truncation = false;
  const auto eval = [&](double t1, double t2) {
    const auto table = TauTable::build(n, set, Times{t1, t2, 0.0}, pinned);
    switch (quantity) {
      case TauQuantity::LogTau: return table.log_tau(n);
      case TauQuantity::LogQ: return table.log_tau(n + 1) - table.log_tau(n);
      case TauQuantity::LogP: return table.log_tau(n - 1) - table.log_tau(n);
    }
    return 0.0;
  };
  switch (which) {
    case TimeDerivative::T1: return fd_first([&](double s) { return eval(s, 0.0); }, h);
    case TimeDerivative::T1T1: return fd_second([&](double s) { return eval(s, 0.0); }, h);
    case TimeDerivative::T2: return fd_first([&](double s) { return eval(0.0, s); }, h);
    case TimeDerivative::T1T2: return fd_mixed(eval, h, h);
  }
  return 0.0;
}

}  // namespace todatw
