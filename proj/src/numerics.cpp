#include "todatw/numerics.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "todatw/error.hpp"

namespace todatw {

namespace {

constexpr int kMaxRulePoints = 512;

QuadratureRule compute_gauss_legendre(int npts) {
  QuadratureRule rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  const int half = (npts + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= npts; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (npts == 1) p0 = 1.0;
      dp = npts * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        // one more evaluation for the derivative at the converged node
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= npts; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (npts == 1) p0 = 1.0;
        dp = npts * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[npts - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[npts - 1 - i] = w;
  }
  if (npts % 2 == 1) rule.nodes[npts / 2] = 0.0;
  return rule;
}

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_legendre(int npts) {
  if (npts < 1 || npts > kMaxRulePoints) {
    throw Error(ErrorKind::InvalidArgument,
                "Gauss-Legendre order must lie in [1, 512], got " + std::to_string(npts));
  }
  static std::mutex mutex;
  static std::array<std::shared_ptr<const QuadratureRule>, kMaxRulePoints + 1> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[npts];
  if (!slot) slot = std::make_shared<const QuadratureRule>(compute_gauss_legendre(npts));
  return slot;
}

std::vector<Panel> PanelScheme::panels_for(const IntervalSet& set) const {
  if (!(truncation_L > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "truncation_L must be positive");
  }
  std::vector<Panel> panels;
  for (const auto& iv : set.intervals()) {
    const double lo = std::max(iv.lo, -truncation_L);
    const double hi = std::min(iv.hi, truncation_L);
    if (!(lo < hi)) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel_width)));
    for (int k = 0; k < pieces; ++k) {
      const double a = lo + (hi - lo) * k / pieces;
      const double b = k + 1 == pieces ? hi : lo + (hi - lo) * (k + 1) / pieces;
      panels.push_back({a, b, points_per_panel});
    }
  }
  return panels;
}

NodeSet composite_nodes(const IntervalSet& set, const PanelScheme& scheme) {
  NodeSet out;
  for (const auto& panel : scheme.panels_for(set)) {
    const auto rule = gauss_legendre(panel.points);
    const double mid = 0.5 * (panel.lo + panel.hi);
    const double half = 0.5 * (panel.hi - panel.lo);
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      out.nodes.push_back(mid + half * rule->nodes[i]);
      out.weights.push_back(half * rule->weights[i]);
    }
  }
  return out;
}

double default_truncation(int n, const IntervalSet& set) {
  return std::max(std::sqrt(2.0 * std::max(n, 0)) + 6.0, set.max_abs_finite_endpoint() + 6.0);
}

PanelScheme default_scheme(int n, const IntervalSet& set, int points_per_panel) {
  PanelScheme scheme;
  scheme.points_per_panel = points_per_panel;
  scheme.truncation_L = default_truncation(n, set);
  return scheme;
}

double integrate_on_set(const std::function<double(double)>& f, const IntervalSet& set,
                        const PanelScheme& scheme) {
  double sum = 0.0;
  for (const auto& panel : scheme.panels_for(set)) {
    const auto rule = gauss_legendre(panel.points);
    const double mid = 0.5 * (panel.lo + panel.hi);
    const double half = 0.5 * (panel.hi - panel.lo);
    double part = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      const double value = f(mid + half * rule->nodes[i]);
      if (std::isnan(value)) {
        throw Error(ErrorKind::EvaluationError, "integrand returned NaN");
      }
      part += rule->weights[i] * value;
    }
    sum += half * part;
  }
  return sum;
}

void check_weight_integrable(const IntervalSet& set, const Times& t) {
  if (t.t2 >= 1.0) {
    throw Error(ErrorKind::DivergentWeight, "t2 >= 1 makes the deformed weight non-integrable");
  }
  if (t.t3 != 0.0) {
    for (const auto& iv : set.intervals()) {
      if (std::isinf(iv.lo) || std::isinf(iv.hi)) {
        throw Error(ErrorKind::DivergentWeight,
                    "t3 != 0 with an infinite endpoint: the cubic term dominates");
      }
    }
  }
}

double deformed_truncation(double base_L, const Times& t) {
  const double width = 1.0 / std::sqrt(1.0 - t.t2);
  const double centre = std::abs(t.t1) / (2.0 * (1.0 - t.t2));
  return base_L * std::max(1.0, width) + centre;
}

double gaussian_moment(int j, const IntervalSet& set, const Times& t) {
  PanelScheme scheme = default_scheme(j / 2, set);
  return gaussian_moment(j, set, t, scheme);
}

double gaussian_moment(int j, const IntervalSet& set, const Times& t, const PanelScheme& scheme) {
  if (j < 0) throw Error(ErrorKind::InvalidArgument, "moment order must be nonnegative");
  check_weight_integrable(set, t);
  PanelScheme deformed = scheme;
  deformed.truncation_L = deformed_truncation(scheme.truncation_L, t);
  return integrate_on_set(
      [&](double x) {
        return std::pow(x, j) * std::exp(-x * x + x * (t.t1 + x * (t.t2 + x * t.t3)));
      },
      set, deformed);
}

namespace {

// Richardson table over h, h/2, ... for an estimate with an even error series.
double richardson(const std::function<double(double)>& d, double h, int levels) {
  if (levels < 0) throw Error(ErrorKind::InvalidArgument, "Richardson levels must be >= 0");
  std::vector<double> t;
  for (int i = 0; i <= levels; ++i) t.push_back(d(h / std::ldexp(1.0, i)));
  double factor = 1.0;
  for (int k = 1; k <= levels; ++k) {
    factor *= 4.0;
    for (int i = levels; i >= k; --i) t[i] = (factor * t[i] - t[i - 1]) / (factor - 1.0);
  }
  return t.back();
}

}  // namespace

double fd_first(const std::function<double(double)>& f, double h, int levels) {
  return richardson([&](double s) { return (f(s) - f(-s)) / (2.0 * s); }, h, levels);
}

double fd_second(const std::function<double(double)>& f, double h, int levels) {
  const double f0 = f(0.0);
  return richardson([&](double s) { return (f(s) - 2.0 * f0 + f(-s)) / (s * s); }, h, levels);
}

double fd_fourth(const std::function<double(double)>& f, double h, int levels) {
  const double f0 = f(0.0);
  return richardson(
      [&](double s) {
        return (f(2.0 * s) - 4.0 * f(s) + 6.0 * f0 - 4.0 * f(-s) + f(-2.0 * s)) / (s * s * s * s);
      },
      h, levels);
}

double fd_mixed(const std::function<double(double, double)>& f, double hs, double ht,
                int levels) {
  const double ratio = ht / hs;
  return richardson(
      [&](double a) {
        const double b = ratio * a;
        return (f(a, b) - f(a, -b) - f(-a, b) + f(-a, -b)) / (4.0 * a * b);
      },
      hs, levels);
}

namespace special {

namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
constexpr double kSeriesCutoff = 2.5;

// erf(x) = 2/sqrt(pi) x e^{-x^2} sum_k (2x^2)^k / (2k+1)!!
double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= 2.0 * x2 / (2.0 * k + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return kTwoOverSqrtPi * x * std::exp(-x2) * sum;
}

// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0
double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::numbers::inv_sqrtpi * std::exp(-x * x) / f;
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  if (std::abs(x) < kSeriesCutoff) return erf_series(x);
  const double tail = erfc_continued_fraction(std::abs(x));
  return x > 0 ? 1.0 - tail : tail - 1.0;
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x >= kSeriesCutoff) return erfc_continued_fraction(x);
  if (x <= -kSeriesCutoff) return 2.0 - erfc_continued_fraction(-x);
  return 1.0 - erf_series(x);
}

}  // namespace special

}  // namespace todatw
