// Acceptance run: one PASS/FAIL line per criterion, with the numbers behind
// each verdict. Exit status is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "todatw/catalog.hpp"
#include "todatw/error.hpp"
#include "todatw/fredholm.hpp"
#include "todatw/tau.hpp"
#include "todatw/tw_system.hpp"

using namespace todatw;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, title.c_str());
  if (!detail.empty()) std::printf("%s", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

IntervalSet left_edge(double a) {
  return IntervalSet(std::vector<Interval>{{-std::numeric_limits<double>::infinity(), a}});
}

void cross_route() {
  double worst = 0.0;
  std::string where;
  for (int n = 1; n <= 6; ++n) {
    for (const auto& set : standard_sets()) {
      const double d = std::abs(fredholm_det(NystromSystem::build(n, set)) -
                                gap_probability_hankel(n, set));
      if (d > worst) {
        worst = d;
        where = fmt("n=%d J=%s", n, set.to_string().c_str());
      }
    }
  }
  verdict(1, worst < 1e-8, "Fredholm vs Hankel determinant, n = 1..6, standard sets",
          fmt("    max |diff| = %.3e at %s (tol 1e-8)\n", worst, where.c_str()));
}

void closed_form() {
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    worst = std::max(worst, std::abs(tau_hankel(n, IntervalSet::real_line()) / tau_closed_form(n) - 1.0));
  }
  verdict(2, worst < 1e-11, "full-line Hankel tau vs closed form, n <= 8",
          fmt("    max relative error = %.3e (tol 1e-11)\n", worst));
}

void erf_anchors() {
  double det_err = 0.0, flow_err = 0.0;
  const std::vector<double> as{2.0, 1.0, 0.5};
  for (double a : as) {
    const auto set = IntervalSet(std::vector<Interval>{{-a, a}});
    det_err = std::max(det_err, std::abs(fredholm_det(NystromSystem::build(1, set)) - std::erf(a)));
  }
  for (const auto& p : tw_flow_at(1, as)) {
    flow_err = std::max(flow_err, std::abs(std::exp(p.log_det) - 0.5 * (1.0 + std::erf(p.a))));
  }
  verdict(3, det_err < 1e-8 && flow_err < 1e-8, "n = 1 erf anchors, a in {0.5, 1, 2}",
          fmt("    det(I-K) on (-a,a) vs erf(a): %.3e; flow vs (1+erf a)/2: %.3e (tol 1e-8)\n",
              det_err, flow_err));
}

// worst residual per identity over the standard grid
bool catalog_block(const std::vector<std::string>& ids, std::string& detail) {
  const auto reports = verify_batch(ids, standard_grid(), {}, 4);
  bool ok = true;
  for (const auto& id : ids) {
    double worst = 0.0;
    int fails = 0;
    std::string where;
    for (const auto& r : reports) {
      if (r.identity != id) continue;
      if (!r.pass) ++fails;
      if (!(r.residual <= worst)) {
        worst = r.residual;
        where = fmt("n=%d J=%s", r.n, r.J.c_str());
      }
    }
    ok = ok && fails == 0;
    detail += fmt("    %-4s worst %.3e (tol %.0e) at %s%s\n", id.c_str(), worst,
                  identity_tolerance(id), where.c_str(),
                  fails ? fmt(", %d failing", fails).c_str() : "");
  }
  return ok;
}

void catalog_main() {
  std::vector<std::string> ids;
  for (int k = 1; k <= 14; ++k) ids.push_back("E" + std::to_string(k));
  std::string detail;
  const bool ok = catalog_block(ids, detail);
  verdict(4, ok, "identity catalog E1-E14, standard grid n = 1..4", detail);
}

void catalog_appendix() {
  const std::vector<std::string> ids{"A3", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13", "A34"};
  std::string detail;
  const bool ok = catalog_block(ids, detail);
  verdict(5, ok, "appendix chain, standard grid n = 1..4", detail);
}

// Literal evaluation: every (n, a) on the grid must show all four deviations
// below 1e-6. A point where the resolvent cannot be formed has no reference
// for u, v, w and counts against the criterion.
void flow_vs_nystrom() {
  constexpr double tol = 1e-6;
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(3.0 - 0.1 * i);
  int total = 0, refused = 0, over = 0;
  double worst_resolved = 0.0;
  std::string detail;
  for (int n = 1; n <= 4; ++n) {
    const auto flow = tw_flow_at(n, grid);
    double worst_n = 0.0, worst_logdet = 0.0, first_refused = std::nan("");
    double worst_hankel = 0.0;
    for (const auto& p : flow) {
      ++total;
      const auto set = left_edge(p.a);
      worst_hankel = std::max(worst_hankel, std::abs(p.log_det - (log_tau_hankel(n, set) -
                                                                   log_tau_closed_form(n))));
      worst_logdet = std::max(
          worst_logdet, std::abs(p.log_det - fredholm_log_det(NystromSystem::build(n, set))));
      try {
        const auto s = compute_tw_state(n, set);
        const double d = std::max({std::abs(p.u - s.u), std::abs(p.v - s.v), std::abs(p.w - s.w),
                                   std::abs(p.log_det - s.log_det)});
        worst_n = std::max(worst_n, d);
        if (!(d < tol)) ++over;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::IllConditioned) throw;
        ++refused;
        if (std::isnan(first_refused)) first_refused = p.a;
      }
    }
    worst_resolved = std::max(worst_resolved, worst_n);
    detail += fmt("    n=%d: max dev (u,v,w,ln det) on resolvable points %.3e; "
                  "ln det vs Nystrom eig %.3e, vs Hankel %.3e",
                  n, worst_n, worst_logdet, worst_hankel);
    if (!std::isnan(first_refused)) {
      detail += fmt("; resolvent refused for a <= %.1f (det <= %.0e)", first_refused,
                    kMinResolventDet);
    }
    detail += "\n";
  }
  detail += fmt("    %d grid points, %d above tol, %d without a Nystrom reference (tol %.0e)\n",
                total, over, refused, tol);
  verdict(6, over == 0 && refused == 0, "TW flow vs Nystrom over a in [-3, 3], n <= 4", detail);
}

struct Halving {
  int checked = 0, exempt = 0, bad = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  std::string worst_where, failures;
};

VerifyOptions scaled_steps(double f) {
  VerifyOptions o;
  o.steps.first = 4e-2 * f;
  o.steps.second = 2.4e-1 * f;
  o.steps.mixed = 4e-2 * f;
  o.steps.fourth = 1.6e-1 * f;
  o.time_step = 4e-2 * f;
  o.time_step_second = 8e-2 * f;
  return o;
}

// Residuals at steps scaled by f and f/2, shipped Richardson levels kept.
// The rounding floor at the halved step is measured, not guessed. Steps 1%
// and 3% longer move an O(h^6) truncation error by 19% at most but re-draw
// the rounding noise (smaller nudges do not, the noise is correlated over
// them). A halved residual below twice that spread, or below twice its
// default-step value, is on the floor and exempt. Pure truncation cannot
// pass the spread test since 2 x 19% < 1.
Halving halving(double f, const std::vector<IdentityReport>& base) {
  const auto& ids = identity_catalog();
  const auto grid = standard_grid();
  const auto a = verify_batch(ids, grid, scaled_steps(f), 4);
  const auto b = verify_batch(ids, grid, scaled_steps(f / 2), 4);
  const auto j1 = verify_batch(ids, grid, scaled_steps(f / 2 * 1.01), 4);
  const auto j3 = verify_batch(ids, grid, scaled_steps(f / 2 * 1.03), 4);
  Halving h;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double spread = std::max(std::abs(b[i].residual - j1[i].residual),
                                   std::abs(b[i].residual - j3[i].residual));
    const double floor = std::max({1e-12, 2.0 * base[i].residual, 2.0 * spread});
    if (b[i].residual <= floor) {
      ++h.exempt;
      continue;
    }
    ++h.checked;
    const double ratio = a[i].residual / b[i].residual;
    if (ratio < h.worst_ratio) {
      h.worst_ratio = ratio;
      h.worst_where = fmt("%s n=%d J=%s (%.3e -> %.3e)", a[i].identity.c_str(), a[i].n,
                          a[i].J.c_str(), a[i].residual, b[i].residual);
    }
    if (!(ratio >= 4.0)) {
      ++h.bad;
      h.failures += fmt("    below 4x: %s n=%d J=%s %.3e -> %.3e (x%.2f, floor %.1e)\n",
                        a[i].identity.c_str(), a[i].n, a[i].J.c_str(), a[i].residual,
                        b[i].residual, ratio, floor);
    }
  }
  return h;
}

// Convergence discipline. At the default steps most residuals already sit on
// rounding noise, where halving can only make them worse, so steps are
// scaled up until truncation dominates. One notch coarser still, separate
// O(h^4) and O(h^6) errors inside one residual can cancel; that regime is
// reported but not judged.
void convergence() {
  const auto base = verify_batch(identity_catalog(), standard_grid(), {}, 4);
  const auto h = halving(0.5, base);
  const auto coarse = halving(1.0, base);
  std::string detail = h.failures;
  detail += fmt("    steps x0.5 -> x0.25 of (4e-2, 2.4e-1, 4e-2, 1.6e-1): %d residuals checked, "
                "%d at their floor, worst ratio %.2f at %s\n",
                h.checked, h.exempt, h.worst_ratio, h.worst_where.c_str());
  detail += fmt("    pre-asymptotic x1 -> x0.5 (not judged): %d of %d below 4x, worst %.2f at %s\n",
                coarse.bad, coarse.checked, coarse.worst_ratio, coarse.worst_where.c_str());
  const int bad = h.bad;

  double quad = 0.0;
  std::string quad_where;
  for (int n = 1; n <= 6; ++n) {
    for (const auto& set : standard_sets()) {
      NystromOptions fine;
      fine.points_per_panel = 96;
      TauOptions tfine;
      tfine.points_per_panel = 96;
      const double d1 = std::abs(fredholm_det(NystromSystem::build(n, set)) -
                                 fredholm_det(NystromSystem::build(n, set, fine)));
      const double d2 =
          std::abs(gap_probability_hankel(n, set) - gap_probability_hankel(n, set, tfine));
      if (std::max(d1, d2) > quad) {
        quad = std::max(d1, d2);
        quad_where = fmt("n=%d J=%s", n, set.to_string().c_str());
      }
    }
  }
  detail += fmt("    48 -> 96 points per panel: max det change %.3e at %s (tol 1e-11)\n", quad,
                quad_where.c_str());
  verdict(7, bad == 0 && quad < 1e-11, "convergence: FD step halving and quadrature doubling",
          detail);
}

void recurrence() {
  double worst = 0.0;
  std::string where;
  for (const auto& set : standard_sets()) {
    const auto q = rebuild_q_ratios(set, 3);
    const auto t = TauTable::build(3, set);
    for (int m = 2; m <= 3; ++m) {
      const double d = std::abs(q[m] - t.Q(m));
      if (d > worst) {
        worst = d;
        where = fmt("Q_%d J=%s", m, set.to_string().c_str());
      }
    }
  }
  verdict(8, worst < 1e-6, "Q_2, Q_3 rebuilt from Q_0, Q_1 vs Hankel, standard sets",
          fmt("    max |diff| = %.3e at %s (tol 1e-6)\n", worst, where.c_str()));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{
      cross_route, closed_form, erf_anchors, catalog_main,
      catalog_appendix, flow_vs_nystrom, convergence, recurrence};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(i + 1), false, "evaluation error", fmt("    %s\n", e.what()));
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
