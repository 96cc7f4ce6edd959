#include "todatw/tw_system.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "todatw/error.hpp"
#include "todatw/hermite.hpp"

namespace todatw {

namespace {

NystromOptions pinned(const NystromOptions& options, int n, const IntervalSet& set) {
  NystromOptions out = options;
  if (out.truncation_L <= 0.0) out.truncation_L = default_truncation(n, set);
  return out;
}

}  // namespace

TWState compute_tw_state(int n, const IntervalSet& set, const NystromOptions& options) {
  TWState state;
  state.n = n;
  state.set = set;
  state.endpoints = signed_endpoints(set);
  if (state.endpoints.empty()) {
    throw Error(ErrorKind::InvalidArgument, "J must have at least one finite endpoint");
  }
  const auto sys = NystromSystem::build(n, set, options);
  state.log_det = sys.cholesky_log_det();
  state.points = sys.size();

  const auto phi = [n](double x) { return phi_pair(n, x).phi; };
  const auto psi = [n](double x) { return phi_pair(n, x).psi; };
  const auto dphi = [n](double x) { return phi_pair_derivative(n, x).phi; };
  const auto dpsi = [n](double x) { return phi_pair_derivative(n, x).psi; };
  const auto qf = sys.resolve(phi, dphi);
  const auto pf = sys.resolve(psi, dpsi);

  const auto& x = sys.nodes();
  const auto& wts = sys.weights();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto f = phi_pair(n, x[i]);
    const double qi = qf.node_values()[i];
    const double pi = pf.node_values()[i];
    state.u += wts[i] * f.phi * qi;
    state.v += wts[i] * f.psi * qi;
    state.v_alt += wts[i] * f.phi * pi;
    state.w += wts[i] * f.psi * pi;
  }
  const double half_root = std::sqrt(0.5 * n);
  state.qtilde = half_root - state.u;
  state.ptilde = state.w + half_root;

  const std::size_t m = state.endpoints.size();
  for (const auto& e : state.endpoints) {
    state.q.push_back(qf(e.value));
    state.p.push_back(pf(e.value));
    state.dq.push_back(qf.derivative(e.value));
    state.dp.push_back(pf.derivative(e.value));
  }
  const auto mi = static_cast<Eigen::Index>(m);
  state.r.resize(mi, mi);
  state.r_direct.resize(mi, mi);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      state.r(j, k) = j == k ? state.p[k] * state.dq[k] - state.q[k] * state.dp[k]
                             : (state.q[j] * state.p[k] - state.p[j] * state.q[k]) /
                                   (state.a(j) - state.a(k));
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double ak = state.a(k);
    const auto column = sys.resolve([n, ak](double y) { return kernel_sum(n, y, ak); });
    for (std::size_t j = 0; j < m; ++j) state.r_direct(j, k) = column(state.a(j));
  }
  return state;
}

double r_diag_gaussian(const TWState& s, std::size_t k) {
  const double root = std::sqrt(2.0 * s.n);
  double value = -2.0 * s.a(k) * s.q[k] * s.p[k] + (root - 2.0 * s.u) * s.p[k] * s.p[k] +
                 (root + 2.0 * s.w) * s.q[k] * s.q[k];
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (m == k) continue;
    value += s.orientation(m) * s.r(k, m) * (s.q[k] * s.p[m] - s.p[k] * s.q[m]);
  }
  return value;
}

double first_integral_residual(const TWState& s) {
  double sum = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) sum += s.orientation(j) * s.q[j] * s.p[j];
  return sum - (2.0 * s.qtilde * s.ptilde - s.n);
}

double log_det_translation_derivative(const TWState& s) {
  double sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) sum -= s.orientation(k) * s.r(k, k);
  return sum;
}

EndpointDerivatives endpoint_derivatives(const TWState& state, double h,
                                         const NystromOptions& options, bool richardson) {
  const double gap = state.set.min_endpoint_gap();
  if (!(h > 0.0) || h > gap / 4.0) {
    throw Error(ErrorKind::InvalidStep, "finite-difference step must lie in (0, gap/4]");
  }
  const auto opts = pinned(options, state.n, state.set);
  const auto m = static_cast<Eigen::Index>(state.size());
  const auto base = state.set.finite_endpoints();

  EndpointDerivatives d;
  d.h = h;
  d.richardson = richardson;
  d.dq = d.dp = d.dr = Eigen::MatrixXd::Zero(m, m);
  d.du = d.dv = d.dw = Eigen::VectorXd::Zero(m);
  d.translate_q = d.translate_p = Eigen::VectorXd::Zero(m);

  // Central difference of every state quantity along a direction in
  // endpoint space, returned as a vector [q.., p.., R_jj.., u, v, w].
  const auto pack = [m](const TWState& s) {
    Eigen::VectorXd out(3 * m + 3);
    for (Eigen::Index j = 0; j < m; ++j) {
      out[j] = s.q[j];
      out[m + j] = s.p[j];
      out[2 * m + j] = s.r(j, j);
    }
    out[3 * m] = s.u;
    out[3 * m + 1] = s.v;
    out[3 * m + 2] = s.w;
    return out;
  };
  const auto derivative = [&](const Eigen::VectorXd& direction) {
    const auto at = [&](double step) {
      std::vector<double> ends = base;
      for (Eigen::Index k = 0; k < m; ++k) ends[k] += step * direction[k];
      return pack(compute_tw_state(state.n, state.set.with_finite_endpoints(ends), opts));
    };
    const auto central = [&](double step) -> Eigen::VectorXd {
      return (at(step) - at(-step)) / (2.0 * step);
    };
    Eigen::VectorXd coarse = central(h);
    if (!richardson) return coarse;
    return Eigen::VectorXd((4.0 * central(0.5 * h) - coarse) / 3.0);
  };

  for (Eigen::Index k = 0; k < m; ++k) {
    const auto g = derivative(Eigen::VectorXd::Unit(m, k));
    d.dq.col(k) = g.segment(0, m);
    d.dp.col(k) = g.segment(m, m);
    d.dr.col(k) = g.segment(2 * m, m);
    d.du[k] = g[3 * m];
    d.dv[k] = g[3 * m + 1];
    d.dw[k] = g[3 * m + 2];
  }
  const auto t = derivative(Eigen::VectorXd::Ones(m));
  d.translate_q = t.segment(0, m);
  d.translate_p = t.segment(m, m);
  return d;
}

ResidualMap check_universal(const TWState& state, double h, const NystromOptions& options) {
  return check_universal(state, endpoint_derivatives(state, h, options));
}

ResidualMap check_universal(const TWState& s, const EndpointDerivatives& d) {
  ResidualMap out{{"39", 0.0}, {"40", 0.0}, {"41", 0.0}, {"43", 0.0}, {"44", 0.0}, {"45", 0.0}};
  const std::size_t m = s.size();
  for (std::size_t k = 0; k < m; ++k) {
    const int e = s.orientation(k);
    out["43"] = std::max(out["43"], std::abs(d.du[k] - e * s.q[k] * s.q[k]));
    out["44"] = std::max(out["44"], std::abs(d.dv[k] - e * s.q[k] * s.p[k]));
    out["45"] = std::max(out["45"], std::abs(d.dw[k] - e * s.p[k] * s.p[k]));
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      out["39"] = std::max(out["39"], std::abs(d.dq(j, k) - e * s.r(j, k) * s.q[k]));
      out["40"] = std::max(out["40"], std::abs(d.dp(j, k) - e * s.r(j, k) * s.p[k]));
      out["41"] = std::max(out["41"], std::abs(s.r_direct(j, k) * (s.a(j) - s.a(k)) -
                                               (s.q[j] * s.p[k] - s.p[j] * s.q[k])));
    }
  }
  return out;
}

ResidualMap check_gaussian(const TWState& state, double h, const NystromOptions& options) {
  return check_gaussian(state, endpoint_derivatives(state, h, options));
}

ResidualMap check_gaussian(const TWState& s, const EndpointDerivatives& d) {
  ResidualMap out{{"46", 0.0}, {"47", 0.0}, {"48", 0.0}, {"49", 0.0},
                  {"49-flipped", 0.0}, {"50", 0.0}, {"51", 0.0}, {"52", 0.0}};
  const double root = std::sqrt(2.0 * s.n);
  const std::size_t m = s.size();
  for (std::size_t j = 0; j < m; ++j) {
    double cross_q = 0.0;
    double cross_p = 0.0;
    double cross_r = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      const int e = s.orientation(k);
      cross_q += e * s.r(j, k) * s.q[k];
      cross_p += e * s.r(j, k) * s.p[k];
      cross_r += e * s.r(j, k) * s.r(j, k);
    }
    const double drift_q = -s.a(j) * s.q[j] + (root - 2.0 * s.u) * s.p[j];
    const double drift_p = s.a(j) * s.p[j] - (root + 2.0 * s.w) * s.q[j];
    out["46"] = std::max(out["46"], std::abs(d.dq(j, j) - (drift_q - cross_q)));
    out["47"] = std::max(out["47"], std::abs(d.dp(j, j) - (drift_p - cross_p)));
    const double algebraic = r_diag_gaussian(s, j);
    out["48"] = std::max({out["48"], std::abs(s.r(j, j) - algebraic),
                          std::abs(s.r_direct(j, j) - algebraic)});
    const double main = -2.0 * s.q[j] * s.p[j];
    out["49"] = std::max(out["49"], std::abs(d.dr(j, j) - (main - cross_r)));
    out["49-flipped"] = std::max(out["49-flipped"], std::abs(d.dr(j, j) - (main + cross_r)));
    out["51"] = std::max(out["51"], std::abs(d.translate_q[j] - drift_q));
    out["52"] = std::max(out["52"], std::abs(d.translate_p[j] - drift_p));
  }
  out["50"] = std::abs(first_integral_residual(s));
  return out;
}

// ---------------------------------------------------------------------------
// Single-edge flow

namespace {

// Extended precision: the determinant spans ~30 decades over the default range
// and the cancellation in R amplifies double rounding.
using Real = long double;
using FlowVector = std::array<Real, 6>;  // q, p, u, v, w, log det

FlowVector flow_rhs(int n, Real a, const FlowVector& y) {
  const Real root = std::sqrt(Real(2) * n);
  const Real q = y[0], p = y[1], u = y[2], w = y[4];
  // J = (-inf, a): a single right endpoint, orientation -1.
  return {-a * q + (root - 2.0 * u) * p,
          a * p - (root + 2.0 * w) * q,
          -q * q,
          -q * p,
          -p * p,
          -2.0 * a * q * p + (root - 2.0 * u) * p * p + (root + 2.0 * w) * q * q};
}

class DormandPrince {
 public:
  DormandPrince(int n, const FlowOptions& options) : n_(n), opt_(options) {}

  // Advances y from a to target (either direction).
  void advance(Real& a, FlowVector& y, Real target) {
    if (a == target) return;
    const Real dir = target < a ? -1 : 1;
    if (h_ == 0) h_ = 1e-3L;
    while ((target - a) * dir > 0) {
      const Real h = std::min(h_, std::abs(target - a));
      FlowVector next, err;
      step(a, y, dir * h, next, err);
      Real norm = 0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const Real scale = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(next[i]));
        norm = std::max(norm, std::abs(err[i]) / scale);
      }
      if (++count_ > opt_.max_steps) {
        throw Error(ErrorKind::Stiffness, "flow step budget exhausted", static_cast<double>(a));
      }
      if (norm <= 1.0) {
        a = std::abs(target - a) <= h ? target : a + dir * h;
        y = next;
        const Real grow = norm == 0 ? Real(5) : std::clamp(0.9L * std::pow(norm, -0.2L), 0.2L, 5.0L);
        h_ = std::max(h_, h) * grow;
      } else {
        h_ = h * std::clamp(0.9L * std::pow(norm, -0.2L), 0.1L, 0.5L);
        if (h_ < 1e-13L * (1 + std::abs(a))) {
          const auto at = static_cast<double>(a);
          throw Error(ErrorKind::Stiffness, "flow step size collapsed at a = " + format_general(at), at);
        }
      }
    }
  }

 private:
  void step(Real a, const FlowVector& y, Real h, FlowVector& out, FlowVector& err) const {
    static constexpr Real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
    static constexpr Real a21 = 1.0L / 5;
    static constexpr Real a31 = 3.0L / 40, a32 = 9.0L / 40;
    static constexpr Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
    static constexpr Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
                            a54 = -212.0L / 729;
    static constexpr Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
                            a64 = 49.0L / 176, a65 = -5103.0L / 18656;
    static constexpr Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192,
                            b5 = -2187.0L / 6784, b6 = 11.0L / 84;
    static constexpr Real e1 = b1 - 5179.0L / 57600, e3 = b3 - 7571.0L / 16695,
                            e4 = b4 - 393.0L / 640, e5 = b5 + 92097.0L / 339200,
                            e6 = b6 - 187.0L / 2100, e7 = -1.0L / 40;
    const auto comb = [&](std::initializer_list<std::pair<Real, const FlowVector*>> terms) {
      FlowVector r = y;
      for (const auto& [c, k] : terms) {
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * c * (*k)[i];
      }
      return r;
    };
    const FlowVector k1 = flow_rhs(n_, a, y);
    const FlowVector k2 = flow_rhs(n_, a + c2 * h, comb({{a21, &k1}}));
    const FlowVector k3 = flow_rhs(n_, a + c3 * h, comb({{a31, &k1}, {a32, &k2}}));
    const FlowVector k4 = flow_rhs(n_, a + c4 * h, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const FlowVector k5 =
        flow_rhs(n_, a + c5 * h, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const FlowVector k6 = flow_rhs(
        n_, a + h, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    out = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const FlowVector k7 = flow_rhs(n_, a + h, out);
    for (std::size_t i = 0; i < y.size(); ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
  }

  int n_;
  FlowOptions opt_;
  Real h_ = 0;
  long count_ = 0;
};

FlowPoint to_point(Real a, const FlowVector& y) {
  const auto d = [](Real x) { return static_cast<double>(x); };
  return {d(a), d(y[0]), d(y[1]), d(y[2]), d(y[3]), d(y[4]), d(y[5])};
}

// phi, psi at the start point, recomputed in extended precision: a relative
// error here is a perturbation K -> (1 + e) K, amplified by 1 / det downstream.
FlowVector asymptotic_start(int n, Real a) {
  Real prev = 0;
  Real cur = std::exp(-a * a / 2) / std::sqrt(std::sqrt(std::numbers::pi_v<Real>));
  for (int k = 0; k < n; ++k) {
    const Real next = std::sqrt(Real(2) / (k + 1)) * a * cur - std::sqrt(Real(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  const Real scale = std::sqrt(std::sqrt(Real(n) / 2));
  return {scale * cur, scale * prev, 0, 0, 0, 0};
}

}  // namespace

double flow_start(int n) { return std::sqrt(2.0 * n) + 6.0; }

std::vector<FlowPoint> integrate_tw_flow(int n, double a_start, double a_end, int steps,
                                         const FlowOptions& options) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (a_start < flow_start(n)) {
    throw Error(ErrorKind::InvalidArgument,
                "a_start must be >= sqrt(2n) + 6 = " + format_general(flow_start(n)));
  }
  if (!(a_end > -flow_start(n)) || !(a_end < a_start)) {
    throw Error(ErrorKind::InvalidArgument, "a_end must lie in (-(sqrt(2n) + 6), a_start)");
  }
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be >= 1");
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) {
    grid.push_back(i == steps ? a_end : a_start - (a_start - a_end) * i / steps);
  }
  return tw_flow_at(n, grid, options);
}

std::vector<FlowPoint> tw_flow_at(int n, const std::vector<double>& grid,
                                  const FlowOptions& options) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (grid.empty()) return {};
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] < grid[i])) {
      throw Error(ErrorKind::InvalidArgument, "flow grid must be strictly descending");
    }
  }
  if (!(grid.back() > -flow_start(n))) {
    throw Error(ErrorKind::InvalidArgument, "flow cannot reach below -(sqrt(2n) + 6)");
  }
  Real a = std::max(flow_start(n), grid.front());
  FlowVector y = asymptotic_start(n, a);
  DormandPrince solver(n, options);
  std::vector<FlowPoint> out;
  out.reserve(grid.size());
  for (double target : grid) {
    solver.advance(a, y, target);
    out.push_back(to_point(a, y));
  }
  return out;
}

}  // namespace todatw
