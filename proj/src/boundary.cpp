#include "todatw/boundary.hpp"

#include <cmath>

#include "todatw/error.hpp"
#include "todatw/numerics.hpp"
#include "todatw/tw_system.hpp"

namespace todatw {

namespace {

void require_step(const IntervalSet& set, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::InvalidStep, "boundary step must be positive and finite");
  }
  if (!(set.min_endpoint_gap() > 4.0 * h)) {
    throw Error(ErrorKind::InvalidStep, "finite endpoints of " + set.to_string() +
                                            " must be more than 4h = " + format_general(4.0 * h) +
                                            " apart");
  }
}

double flow_point(int k, double a, double s) {
  switch (k) {
    case -1: return a + s;
    case 0: return a * std::exp(s);
    default: {
      const double base = 1.0 - k * s * std::pow(a, k);
      if (!(base > 0.0)) {
        throw Error(ErrorKind::InvalidStep, "boundary flow B_" + std::to_string(k) +
                                                " leaves the real line at a = " + format_general(a));
      }
      return a * std::pow(base, -1.0 / k);
    }
  }
}

}  // namespace

IntervalSet boundary_flow(int k, const IntervalSet& set, double s) {
  if (k < -1) throw Error(ErrorKind::InvalidArgument, "boundary operators need k >= -1");
  auto ends = set.finite_endpoints();
  for (double& a : ends) a = flow_point(k, a, s);
  return set.with_finite_endpoints(ends);
}

double boundary_op(int k, const SetFunction& f, const IntervalSet& set, double h,
                   int levels) {
  require_step(set, h);
  return fd_first([&](double s) { return f(boundary_flow(k, set, s)); }, h, levels);
}

double boundary_op_squared(int k, const SetFunction& f, const IntervalSet& set, double h,
                           int levels) {
  require_step(set, h);
  return fd_second([&](double s) { return f(boundary_flow(k, set, s)); }, h, levels);
}

double boundary_op_mixed(int k, int l, const SetFunction& f, const IntervalSet& set, double h,
                         int levels) {
  require_step(set, h);
  return fd_mixed(
      [&](double s, double r) { return f(boundary_flow(l, boundary_flow(k, set, s), r)); }, h,
      h, levels);
}

double boundary_op_fourth(const SetFunction& f, const IntervalSet& set, double h,
                          int levels) {
  require_step(set, h);
  return fd_fourth([&](double s) { return f(boundary_flow(-1, set, s)); }, h, levels);
}

double b_minus1_ln_tau_analytic(int n, const IntervalSet& set, const NystromOptions& options) {
  if (set.is_real_line()) return 0.0;
  return log_det_translation_derivative(compute_tw_state(n, set, options));
}

void to_json(nlohmann::json& out, const IdentityReport& r) {
  out = nlohmann::json{{"identity", r.identity}, {"n", r.n},     {"J", r.J},
                       {"residual", r.residual}, {"tol", r.tol}, {"pass", r.pass},
                       {"meta", r.meta}};
}

std::string csv_header() { return "identity,n,J,residual,tol,pass"; }

std::string to_csv_row(const IdentityReport& r) {
  return r.identity + "," + std::to_string(r.n) + ",\"" + r.J + "\"," +
         format_general(r.residual) + "," + format_general(r.tol) + "," +
         (r.pass ? "true" : "false");
}

}  // namespace todatw
