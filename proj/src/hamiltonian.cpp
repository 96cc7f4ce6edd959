#include "todatw/hamiltonian.hpp"

#include <cmath>
#include <functional>

#include "context.hpp"

namespace todatw {

CanonicalState canonical_from_tw(const TWState& s) {
  CanonicalState cs;
  cs.n = s.n;
  cs.u = s.u;
  cs.w = s.w;
  const double root = std::sqrt(2.0 * s.n);
  cs.utilde = root - 2.0 * s.u;
  cs.wtilde = root + 2.0 * s.w;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double e = s.orientation(k);
    cs.a.push_back(s.a(k));
    cs.Xsq.push_back(-4.0 * e * s.q[k] * s.q[k]);
    cs.Ysq.push_back(-e * s.p[k] * s.p[k]);
    cs.XY.push_back(-2.0 * e * s.q[k] * s.p[k]);
  }
  return cs;
}

MomentSums moment_sums(const CanonicalState& cs) {
  MomentSums m;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    double power = 1.0;
    for (int k = 0; k < 4; ++k) {
      m.Q[k] += power * cs.Xsq[j];
      m.P[k] += power * cs.Ysq[j];
      m.S[k] += power * cs.XY[j];
      power *= cs.a[j];
    }
  }
  return m;
}

namespace {

// G_j at endpoint positions `a` with the monomials of `cs` held fixed.
std::vector<double> hamiltonians_at(const CanonicalState& cs, const std::vector<double>& a) {
  const std::size_t m = cs.size();
  std::vector<double> g(m);
  for (std::size_t j = 0; j < m; ++j) {
    double cross = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      if (a[j] == a[k]) {
        throw Error(ErrorKind::SingularConfiguration, "coincident endpoints in Hamiltonians");
      }
      cross += cs.cross(j, k) / (a[j] - a[k]);
    }
    g[j] = -a[j] * cs.XY[j] + cs.utilde * cs.Ysq[j] + 0.25 * cs.wtilde * cs.Xsq[j] - 0.25 * cross;
  }
  return g;
}

double weighted_sum(const std::vector<double>& g, const std::vector<double>& a, int power) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) acc += std::pow(a[j], power) * g[j];
  return acc;
}

}  // namespace

std::vector<double> hamiltonians(const CanonicalState& cs) { return hamiltonians_at(cs, cs.a); }

AppendixForms appendix_forms(const CanonicalState& cs) {
  const auto m = moment_sums(cs);
  const auto& Q = m.Q;
  const auto& P = m.P;
  const auto& S = m.S;
  const double ut = cs.utilde, wt = cs.wtilde;
  AppendixForms f{};
  f.r0 = -S[1] + ut * P[0] + 0.25 * wt * Q[0];
  f.r1 = -S[2] + ut * P[1] + 0.25 * wt * Q[1] - 0.25 * Q[0] * P[0] + 0.25 * S[0] * S[0];
  f.r2 = -S[3] + ut * P[2] + 0.25 * wt * Q[2] - 0.25 * (Q[0] * P[1] + Q[1] * P[0]) +
         0.5 * S[0] * S[1];
  f.bm1_sq = -S[0];
  f.bm1_b1 = -3.0 * S[2] + 2.0 * ut * P[1] + 0.5 * wt * Q[1] - 0.5 * Q[0] * P[0] + 0.5 * S[0] * S[0];
  f.b0_sq = -2.0 * S[2] + ut * P[1] + 0.25 * wt * Q[1];
  f.bm1_fourth = -2.0 * Q[0] * P[0] - 4.0 * ut * P[1] - wt * Q[1] + 4.0 * ut * wt * S[0];
  const double root = std::sqrt(2.0 * cs.n);
  f.first_integral = 2.0 * root * (cs.u - cs.w) + 4.0 * cs.u * cs.w - S[0];
  return f;
}

namespace {

using detail::Context;
using detail::Parts;

struct AppendixInputs {
  TWState state;
  CanonicalState cs;
  AppendixForms forms;
};

AppendixInputs inputs(const Context& c) {
  auto state = c.tw(c.set());
  auto cs = canonical_from_tw(state);
  auto forms = appendix_forms(cs);
  return {std::move(state), std::move(cs), forms};
}

// R_power^H as a function of the endpoints alone, TW monomials frozen.
SetFunction frozen_r(const CanonicalState& cs, int power) {
  return [cs, power](const IntervalSet& j) {
    const auto a = j.finite_endpoints();
    return weighted_sum(hamiltonians_at(cs, a), a, power);
  };
}

double s0_of(const Context& c, const IntervalSet& j) {
  const auto s = c.tw(j);
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) acc -= 2.0 * s.orientation(k) * s.q[k] * s.p[k];
  return acc;
}

double fourth_via_s0(const Context& c) {
  return -c.b2([&](const IntervalSet& j) { return s0_of(c, j); });
}

double kp_scale(int n, double b4, double b2) { return std::abs(b4) + 8.0 * n * std::abs(b2); }

IdentityReport a3(const Context& c) {
  const auto in = inputs(c);
  const auto g = hamiltonians(in.cs);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    worst = std::max(worst, std::abs(g[j] + in.state.orientation(j) * in.state.r(j, j)));
  }
  Parts parts;
  parts.add("G_j", worst);
  return parts.report("A3", c, identity_tolerance("A3"));
}

IdentityReport a6(const Context& c) {
  Parts parts;
  parts.add("first-integral", inputs(c).forms.first_integral);
  return parts.report("A6", c, identity_tolerance("A6"));
}

IdentityReport a7(const Context& c) {
  const auto in = inputs(c);
  const auto g = hamiltonians(in.cs);
  Parts parts;
  parts.add("analytic", in.forms.r0 - log_det_translation_derivative(in.state));
  parts.add("fd", in.forms.r0 - c.b1(c.log_tau()));
  parts.add("sum-G", in.forms.r0 - weighted_sum(g, in.cs.a, 0));
  return parts.report("A7", c, identity_tolerance("A7"));
}

IdentityReport a8_a9(const Context& c, int k) {
  const auto in = inputs(c);
  const auto g = hamiltonians(in.cs);
  const double closed = k == 0 ? in.forms.r1 : in.forms.r2;
  Parts parts;
  parts.add("fd", closed - c.b1(c.log_tau(), k));
  parts.add("sum-G", closed - weighted_sum(g, in.cs.a, k + 1));
  const char* id = k == 0 ? "A8" : "A9";
  return parts.report(id, c, identity_tolerance(id));
}

// B_k R_l^H with frozen monomials against the closed form and against full
// differencing of ln tau.
IdentityReport second_order(const Context& c, const std::string& id) {
  const auto in = inputs(c);
  const auto& st = c.steps();
  double closed = 0.0, frozen = 0.0, full = 0.0;
  if (id == "A10") {
    closed = in.forms.bm1_sq;
    frozen = c.b1(frozen_r(in.cs, 0));
    full = c.b2(c.log_tau());
  } else if (id == "A11") {
    closed = in.forms.bm1_b1;
    frozen = c.b1(frozen_r(in.cs, 2));
    full = boundary_op_mixed(-1, 1, c.log_tau(), c.set(), st.mixed, st.second_levels);
  } else {
    closed = in.forms.b0_sq;
    frozen = c.b1(frozen_r(in.cs, 1), 0);
    full = c.b2(c.log_tau(), 0);
  }
  Parts parts;
  parts.add("frozen", frozen - closed);
  parts.add("full", full - closed);
  return parts.report(id, c, identity_tolerance(id));
}

IdentityReport a13(const Context& c) {
  const auto in = inputs(c);
  const int n = c.n();
  const double lhs = fourth_via_s0(c);
  const double scale = kp_scale(n, lhs, in.forms.bm1_sq);
  const auto& st = c.steps();
  const double direct = boundary_op_fourth(c.log_tau(), c.set(), st.fourth, st.levels);
  Parts parts;
  parts.add("relative", (lhs - in.forms.bm1_fourth) / scale);
  parts.note("B_-1^4-direct-relative", (direct - lhs) / scale);
  parts.note("scale", scale);
  return parts.report("A13", c, identity_tolerance("A13"));
}

IdentityReport a34(const Context& c) {
  const auto in = inputs(c);
  const int n = c.n();
  const auto& f = in.forms;
  const double b4 = fourth_via_s0(c);
  const double s0 = -f.bm1_sq;
  const double assembled =
      b4 + 8.0 * n * f.bm1_sq + 12.0 * f.b0_sq + 24.0 * f.r1 - 16.0 * f.bm1_b1 + 6.0 * s0 * s0;
  const double scale = kp_scale(n, b4, f.bm1_sq);
  Parts parts;
  parts.add("relative", assembled / scale);
  parts.note("absolute", assembled);
  parts.note("closed-form", 4.0 * s0 * (in.cs.utilde * in.cs.wtilde - 2.0 * n + s0));
  parts.note("scale", scale);
  return parts.report("A34", c, identity_tolerance("A34"));
}

}  // namespace

IdentityReport verify_appendix_identity(const std::string& id, int n, const IntervalSet& set,
                                        const VerifyOptions& options) {
  const Context c(n, set, options);
  if (id == "A3") return a3(c);
  if (id == "A6") return a6(c);
  if (id == "A7") return a7(c);
  if (id == "A8") return a8_a9(c, 0);
  if (id == "A9") return a8_a9(c, 1);
  if (id == "A10" || id == "A11" || id == "A12") return second_order(c, id);
  if (id == "A13") return a13(c);
  if (id == "A34") return a34(c);
  throw Error(ErrorKind::UnknownIdentity, "unknown appendix identity '" + id + "'");
}

std::vector<IdentityReport> verify_appendix(int n, const IntervalSet& set,
                                            const VerifyOptions& options) {
  std::vector<IdentityReport> out;
  for (const char* id : {"A3", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13", "A34"}) {
    out.push_back(verify_appendix_identity(id, n, set, options));
  }
  return out;
}

}  // namespace todatw
