#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "todatw/domain.hpp"
#include "todatw/fredholm.hpp"

namespace todatw {

/// Resolvent quantities at the finite endpoints a_1 < ... < a_m of J.
///
/// q = (I-K)^{-1} phi and p = (I-K)^{-1} psi; u, v, w are their J^c inner
/// products with phi and psi. Boundary terms of the endpoint equations carry
/// `orientation(k)`: +1 at a left endpoint of J, -1 at a right endpoint.
struct TWState {
  int n = 0;
  IntervalSet set;
  std::vector<SignedEndpoint> endpoints;
  std::vector<double> q, p;    // q(a_k), p(a_k)
  std::vector<double> dq, dp;  // x-derivatives at a_k
  /// R(a_j, a_k): off-diagonal from (q_j p_k - p_j q_k) / (a_j - a_k),
  /// diagonal from p q' - q p'.
  Eigen::MatrixXd r;
  /// R(a_j, a_k) straight from the grid resolvent, (I-K)^{-1} K(., a_k) at a_j.
  Eigen::MatrixXd r_direct;
  double u = 0.0;
  double v = 0.0;      // (q, psi chi)
  double v_alt = 0.0;  // (p, phi chi)
  double w = 0.0;
  double qtilde = 0.0;  // sqrt(n/2) - u
  double ptilde = 0.0;  // w + sqrt(n/2)
  double log_det = 0.0;
  int points = 0;       // Nystrom nodes

  std::size_t size() const noexcept { return endpoints.size(); }
  int orientation(std::size_t k) const { return endpoints.at(k).orientation; }
  double a(std::size_t k) const { return endpoints.at(k).value; }
};

/// Throws Error(InvalidArgument) if J has no finite endpoint and
/// Error(IllConditioned) when det(I - K) is too small to resolve.
TWState compute_tw_state(int n, const IntervalSet& set, const NystromOptions& options = {});

/// R(a_k, a_k) from the Gaussian algebraic relation
/// -2 a q p + (sqrt(2n) - 2u) p^2 + (sqrt(2n) + 2w) q^2 + sum_{m != k} e_m R_km (q_k p_m - p_k q_m).
double r_diag_gaussian(const TWState& state, std::size_t k);

/// sum_j e_j q_j p_j - (2 Qtilde Ptilde - n).
double first_integral_residual(const TWState& state);

/// d log det(I - K) along translation of all endpoints, -sum_k e_k R(a_k, a_k).
double log_det_translation_derivative(const TWState& state);

/// Endpoint derivatives by central differences of full rebuilds.
/// Entry [j, k] is the total derivative d(.)_j / d a_k (a_j moves with the
/// endpoint when j = k). `translate_*` differentiate along all endpoints
/// shifted together.
struct EndpointDerivatives {
  Eigen::MatrixXd dq, dp, dr;
  Eigen::VectorXd du, dv, dw;
  Eigen::VectorXd translate_q, translate_p;
  double h = 0.0;
  bool richardson = true;
};

EndpointDerivatives endpoint_derivatives(const TWState& state, double h,
                                         const NystromOptions& options = {},
                                         bool richardson = true);

using ResidualMap = std::map<std::string, double>;

/// Residuals (max-norm over endpoints) of the potential-independent endpoint
/// equations: keys "39", "40", "41", "43", "44", "45". Throws
/// Error(InvalidStep) when h exceeds a quarter of the smallest endpoint gap.
ResidualMap check_universal(const TWState& state, double h, const NystromOptions& options = {});
ResidualMap check_universal(const TWState& state, const EndpointDerivatives& d);

/// Gaussian-specific residuals: "46", "47", "48", "49", "50", "51", "52",
/// plus "49-flipped" (the cross sum with opposite sign, for diagnosis).
ResidualMap check_gaussian(const TWState& state, double h, const NystromOptions& options = {});
ResidualMap check_gaussian(const TWState& state, const EndpointDerivatives& d);

/// One sample of the single-edge flow for J = (-inf, a).
struct FlowPoint {
  double a;
  double q, p, u, v, w;
  double log_det;
};

struct FlowOptions {
  double rtol = 1e-16;  // state is carried in long double
  double atol = 1e-30;  // q, p start near 1e-10; an absolute floor would dominate
  long max_steps = 2'000'000;
};

/// Start of the asymptotic regime, sqrt(2n) + 6.
double flow_start(int n);

/// Integrates the closed five-dimensional system for J = (-inf, a) from
/// a_start down to a_end with adaptive Dormand-Prince 5(4) stepping,
/// returning steps + 1 equally spaced samples. Requires
/// a_start >= sqrt(2n) + 6 and a_end > -(sqrt(2n) + 6). Throws
/// Error(Stiffness) carrying the last accepted a on step-size collapse.
std::vector<FlowPoint> integrate_tw_flow(int n, double a_start, double a_end, int steps,
                                         const FlowOptions& options = {});

/// Flow samples at arbitrary descending abscissae, integrating from
/// max(flow_start(n), grid[0]).
std::vector<FlowPoint> tw_flow_at(int n, const std::vector<double>& descending_grid,
                                  const FlowOptions& options = {});

}  // namespace todatw
