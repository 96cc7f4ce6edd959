#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "todatw/domain.hpp"
#include "todatw/fredholm.hpp"
#include "todatw/tau.hpp"

namespace todatw {

/// A scalar function of the spectral window.
using SetFunction = std::function<double(const IntervalSet&)>;

/// Finite-difference steps for boundary operators. Second-order operators
/// start wide and take two Richardson levels: ratios like P_n reach O(1e3),
/// and one level at a step small enough to kill truncation lands on the
/// rounding floor.
struct BoundarySteps {
  double first = 1e-3;
  double second = 6e-2;
  /// B_k B_l with k != l. B_1 moves an endpoint at a by about s a^2, so the
  /// flow parameter must stay smaller here.
  double mixed = 1e-2;
  double fourth = 5e-2;
  int levels = 1;
  int second_levels = 2;
};

/// The flow generated by B_k = sum_i a_i^{k+1} d/da_i, applied to every
/// finite endpoint for parameter s:
///   k = -1: a + s,  k = 0: a e^s,  k >= 1: a (1 - k s a^k)^{-1/k}.
/// Infinite endpoints stay put. Throws Error(InvalidStep) when the flow
/// does not exist at s or endpoints collide.
IntervalSet boundary_flow(int k, const IntervalSet& set, double s);

/// B_k F as the derivative of F along the flow at s = 0. Throws
/// Error(InvalidStep) unless finite endpoints are more than 4h apart.
double boundary_op(int k, const SetFunction& f, const IntervalSet& set, double h = 1e-3,
                   int levels = 1);
/// B_k^2 F, the second derivative along the same flow.
double boundary_op_squared(int k, const SetFunction& f, const IntervalSet& set,
                           double h = 6e-2, int levels = 2);
/// B_k B_l F = d/ds d/dr F(flow_l(r, flow_k(s, J))) at 0.
double boundary_op_mixed(int k, int l, const SetFunction& f, const IntervalSet& set,
                         double h = 1e-2, int levels = 2);
/// B_{-1}^4 F by the five-point stencil along translation.
double boundary_op_fourth(const SetFunction& f, const IntervalSet& set, double h = 5e-2,
                          int levels = 1);

/// -sum_k e_k R(a_k, a_k), the translation derivative of ln tau_n^J with no
/// differencing.
double b_minus1_ln_tau_analytic(int n, const IntervalSet& set, const NystromOptions& options = {});

struct IdentityReport {
  std::string identity;
  int n = 0;
  std::string J;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  nlohmann::json meta = nlohmann::json::object();
};

void to_json(nlohmann::json& out, const IdentityReport& report);
std::string csv_header();
std::string to_csv_row(const IdentityReport& report);

/// Quadrature and step settings shared by every identity check.
struct VerifyOptions {
  int points_per_panel = 48;
  /// <= 0 selects the per-configuration default.
  double truncation_L = 0.0;
  BoundarySteps steps;
  /// Time-derivative step for the Toda and Virasoro checks.
  double time_step = 1e-3;
  double time_step_second = 1e-2;
};

/// Main-text identities "E1" .. "E14". Throws Error(UnknownIdentity) for
/// anything else.
IdentityReport verify(const std::string& identity, int n, const IntervalSet& set,
                      const VerifyOptions& options = {});

/// Q_0 .. Q_{up_to} on J where Q_0 and Q_1 come from Hankel ratios and every
/// later one from the boundary recurrence
/// Q_{m+1} = Q_m (B_{-1}^2 ln Q_m / 4 + Q_m / Q_{m-1} + 1/2).
std::vector<double> rebuild_q_ratios(const IntervalSet& set, int up_to,
                                     const VerifyOptions& options = {});

/// Default tolerance of a catalog entry (main text or appendix).
double identity_tolerance(const std::string& identity);

}  // namespace todatw
