#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "todatw/domain.hpp"

namespace todatw {

/// Nodes strictly increasing, weights positive and summing to the reference
/// length.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// npts-point Gauss-Legendre rule on [-1, 1], 1 <= npts <= 512. Rules are
/// computed once and shared.
std::shared_ptr<const QuadratureRule> gauss_legendre(int npts);

struct Panel {
  double lo;
  double hi;
  int points;
};

/// Composite Gauss-Legendre layout. Infinite ends are cut at
/// +-truncation_L; every component is split into equal panels no wider than
/// max_panel_width.
struct PanelScheme {
  int points_per_panel = 48;
  double truncation_L = 10.0;
  double max_panel_width = 8.0;

  std::vector<Panel> panels_for(const IntervalSet& set) const;
};

/// Flattened nodes/weights of a composite rule.
struct NodeSet {
  std::vector<double> nodes;
  std::vector<double> weights;
};

NodeSet composite_nodes(const IntervalSet& set, const PanelScheme& scheme);

/// Cutoff replacing infinite endpoints: max(sqrt(2n) + 6, max|a| + 6).
double default_truncation(int n, const IntervalSet& set);
PanelScheme default_scheme(int n, const IntervalSet& set, int points_per_panel = 48);

/// Composite Gauss-Legendre approximation of the integral of f over the set.
/// Throws Error(EvaluationError) if f returns NaN.
double integrate_on_set(const std::function<double(double)>& f, const IntervalSet& set,
                        const PanelScheme& scheme);

/// Deformation times (t1, t2, t3) of the weight exp(-x^2 + t1 x + t2 x^2 + t3 x^3).
struct Times {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};

/// Throws Error(DivergentWeight) when the deformed weight is not integrable
/// on the set.
void check_weight_integrable(const IntervalSet& set, const Times& t);
/// Truncation adjusted for the deformed weight's centre and width.
double deformed_truncation(double base_L, const Times& t);

/// Integral over the set of x^j exp(-x^2 + t1 x + t2 x^2 + t3 x^3).
double gaussian_moment(int j, const IntervalSet& set, const Times& t = {});
double gaussian_moment(int j, const IntervalSet& set, const Times& t, const PanelScheme& scheme);

/// Central finite differences of a scalar function at 0. `levels` Richardson
/// halvings (h, h/2, ..., h/2^levels) each cancel one more even power of h;
/// 0 gives the plain stencil.
double fd_first(const std::function<double(double)>& f, double h, int levels = 1);
double fd_second(const std::function<double(double)>& f, double h, int levels = 1);
/// Five-point fourth difference.
double fd_fourth(const std::function<double(double)>& f, double h, int levels = 1);
/// d^2 f / ds dt at (0, 0) from the four-corner stencil.
double fd_mixed(const std::function<double(double, double)>& f, double hs, double ht,
                int levels = 1);

namespace special {

/// Error function to a few ulp relative over the real line: power series with
/// positive terms for |x| < 2.5, Lentz continued fraction for erfc beyond.
double erf(double x);
double erfc(double x);

}  // namespace special

}  // namespace todatw
