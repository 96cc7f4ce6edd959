#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "context.hpp"
#include "todatw/boundary.hpp"

namespace todatw {

namespace {

using detail::Context;
using detail::Parts;

double sum_eps(const TWState& s, const std::function<double(std::size_t)>& term) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += s.orientation(k) * term(k);
  return acc;
}

// Analytic endpoint derivatives of the TW quantities.
double b_minus1_qtilde(const TWState& s) {
  return -sum_eps(s, [&](std::size_t k) { return s.q[k] * s.q[k]; });
}
double b_minus1_ptilde(const TWState& s) {
  return sum_eps(s, [&](std::size_t k) { return s.p[k] * s.p[k]; });
}
double b_minus1_v(const TWState& s) {
  return sum_eps(s, [&](std::size_t k) { return s.q[k] * s.p[k]; });
}
double b0_v(const TWState& s) {
  return sum_eps(s, [&](std::size_t k) { return s.a(k) * s.q[k] * s.p[k]; });
}

double c_n(int n) {
  return std::exp(n * std::numbers::ln2 - std::lgamma(n + 1.0)) *
         std::sqrt(n / (2.0 * std::numbers::pi));
}

IdentityReport e1(const Context& c) {
  const int n = c.n();
  const double b2 = c.b2(c.log_tau());
  const auto t = c.tau(c.set());
  const auto s = c.tw(c.set());
  Parts parts;
  parts.add("tau", b2 - 2.0 * (2.0 * t.Q(n) * t.P(n) - n));
  parts.add("tw", b2 - 2.0 * (2.0 * s.qtilde * s.ptilde - n));
  return parts.report("E1", c, identity_tolerance("E1"));
}

// B^2 X = (sign 2 B_0 + 4n) X - 8 Q P X for X = Q or P, in either variable set.
IdentityReport e2_e3(const Context& c, bool for_q) {
  const int n = c.n();
  const double sign = for_q ? -1.0 : 1.0;
  const auto residual = [&](const SetFunction& f, double q, double p) {
    const double x = for_q ? q : p;
    return c.b2(f) - (sign * 2.0 * c.b1(f, 0) + 4.0 * n * x - 8.0 * q * p * x);
  };
  const auto t = c.tau(c.set());
  const auto s = c.tw(c.set());
  Parts parts;
  parts.add("tau", residual(for_q ? c.q_ratio() : c.p_ratio(), t.Q(n), t.P(n)));
  parts.add("tw", residual(for_q ? c.q_tilde() : c.p_tilde(), s.qtilde, s.ptilde));
  return parts.report(for_q ? "E2" : "E3", c, identity_tolerance(for_q ? "E2" : "E3"));
}

IdentityReport e4(const Context& c) {
  const auto s = c.tw(c.set());
  const double analytic = log_det_translation_derivative(s);
  Parts parts;
  parts.add("analytic", s.v - 0.5 * analytic);
  parts.add("symmetry", s.v - s.v_alt);
  parts.note("fd", s.v - 0.5 * c.b1(c.log_tau()));
  return parts.report("E4", c, identity_tolerance("E4"));
}

IdentityReport e5(const Context& c) {
  const int n = c.n();
  const auto j = c.tau(c.set());
  const auto full = c.tau_full();
  const auto s = c.tw(c.set());
  const double root = std::sqrt(0.5 * n);
  const double b = std::sqrt(full.Q(n) * full.P(n));
  // 2^n / (n! sqrt(pi)) and its counterpart for n - 1
  const double up = std::exp(n * std::numbers::ln2 - std::lgamma(n + 1.0) -
                             0.5 * std::log(std::numbers::pi));
  const double down = std::exp(std::lgamma(n) + 0.5 * std::log(std::numbers::pi) -
                               (n - 1) * std::numbers::ln2);
  const auto rel = [&](int m) { return j.log_tau(m) - full.log_tau(m); };
  Parts parts;
  parts.add("u-ratio", s.u - root * (1.0 - up * j.Q(n)));
  parts.add("u-normalized", s.u - b * (1.0 - std::exp(rel(n + 1) - rel(n))));
  parts.add("w-ratio", s.w - root * (down * j.P(n) - 1.0));
  parts.add("w-normalized", s.w - b * (std::exp(rel(n - 1) - rel(n)) - 1.0));
  return parts.report("E5", c, identity_tolerance("E5"));
}

IdentityReport e6(const Context& c) {
  const int n = c.n();
  const auto t = c.tau(c.set());
  const SetFunction log_q = [&](const IntervalSet& j) {
    const auto tj = c.tau(j);
    return tj.log_tau(n + 1) - tj.log_tau(n);
  };
  const double rebuilt = t.Q(n) * (c.b2(log_q) / 4.0 + t.Q(n) * t.P(n) + 0.5);
  Parts parts;
  parts.add("P_{n+1}Q_n-1", t.P(n + 1) * t.Q(n) - 1.0);
  parts.add("Q_{n+1}", t.Q(n + 1) - rebuilt);
  return parts.report("E6", c, identity_tolerance("E6"));
}

struct TimeDerivatives {
  double lt_1, lt_11, lt_2;
  double lq_1, lq_11, lq_2;
  double lp_1, lp_11, lp_2;
};

TimeDerivatives time_derivatives(const Context& c) {
  const int n = c.n();
  const double h1 = c.options().time_step;
  const double h2 = c.options().time_step_second;
  const auto d = [&](TauQuantity q, TimeDerivative w) {
    const bool second = w == TimeDerivative::T1T1 || w == TimeDerivative::T1T2;
    return time_derivative(n, c.set(), q, w, second ? h2 : h1, c.tau_options());
  };
  return {d(TauQuantity::LogTau, TimeDerivative::T1), d(TauQuantity::LogTau, TimeDerivative::T1T1),
          d(TauQuantity::LogTau, TimeDerivative::T2), d(TauQuantity::LogQ, TimeDerivative::T1),
          d(TauQuantity::LogQ, TimeDerivative::T1T1), d(TauQuantity::LogQ, TimeDerivative::T2),
          d(TauQuantity::LogP, TimeDerivative::T1), d(TauQuantity::LogP, TimeDerivative::T1T1),
          d(TauQuantity::LogP, TimeDerivative::T2)};
}

nlohmann::json time_meta(const Context& c) {
  return {{"time_steps",
           {{"first", c.options().time_step}, {"second", c.options().time_step_second}}}};
}

IdentityReport e7(const Context& c) {
  const int n = c.n();
  const auto t = c.tau(c.set());
  const auto d = time_derivatives(c);
  const double q = t.Q(n);
  const double p = t.P(n);
  Parts parts;
  parts.add("lnTau_11", d.lt_11 - q * p);
  // Q_t = Q (ln Q)_t and Q_11 = Q ((ln Q)_11 + (ln Q)_1^2); likewise for P.
  parts.add("Q_2", q * (d.lq_2 - d.lq_11 - d.lq_1 * d.lq_1 - 2.0 * d.lt_11));
  parts.add("P_2", -p * (d.lp_2 + d.lp_11 + d.lp_1 * d.lp_1 + 2.0 * d.lt_11));
  return parts.report("E7", c, identity_tolerance("E7"), time_meta(c));
}

IdentityReport e8(const Context& c) {
  const int n = c.n();
  const auto t = c.tau(c.set());
  const auto d = time_derivatives(c);
  Parts parts;
  parts.add("toda", d.lt_11 - std::exp(t.log_tau(n + 1) + t.log_tau(n - 1) - 2.0 * t.log_tau(n)));
  parts.add("lnQ_2", d.lq_2 - (d.lq_11 + d.lq_1 * d.lq_1 + 2.0 * d.lt_11));
  return parts.report("E8", c, identity_tolerance("E8"), time_meta(c));
}

IdentityReport e9(const Context& c) {
  const int n = c.n();
  const auto d = time_derivatives(c);
  const auto lt = c.log_tau();
  Parts parts;
  parts.add("t1", d.lt_1 + 0.5 * c.b1(lt));
  parts.add("t1t1", d.lt_11 - 0.25 * c.b2(lt) - 0.5 * n);
  parts.add("t2", d.lt_2 + 0.5 * c.b1(lt, 0) - 0.5 * n * n);
  return parts.report("E9", c, identity_tolerance("E9"), time_meta(c));
}

IdentityReport e10(const Context& c) {
  const int n = c.n();
  const auto lt = c.log_tau();
  const auto& st = c.steps();
  const double b4 = boundary_op_fourth(lt, c.set(), st.fourth, st.levels);
  const double b2 = c.b2(lt);
  const double b00 = c.b2(lt, 0);
  const double b0 = c.b1(lt, 0);
  const double bm1b1 = boundary_op_mixed(-1, 1, lt, c.set(), st.mixed, st.second_levels);
  const double lhs = b4 + 8.0 * n * b2 + 12.0 * b00 + 24.0 * b0 - 16.0 * bm1b1 + 6.0 * b2 * b2;
  const double scale = std::abs(b4) + 8.0 * n * std::abs(b2);
  Parts parts;
  parts.add("relative", lhs / scale);
  parts.note("absolute", lhs);
  parts.note("scale", scale);
  parts.note("B_-1^4", b4);
  return parts.report("E10", c, identity_tolerance("E10"));
}

IdentityReport e11(const Context& c) {
  Parts parts;
  parts.add("first-integral", first_integral_residual(c.tw(c.set())));
  return parts.report("E11", c, identity_tolerance("E11"));
}

IdentityReport e12(const Context& c) {
  const int n = c.n();
  const auto t = c.tau(c.set());
  const auto s = c.tw(c.set());
  const double analytic = log_det_translation_derivative(s);
  const SetFunction b_ln_tau = [&](const IntervalSet& j) {
    return log_det_translation_derivative(c.tw(j));
  };
  const double b2 = c.b1(b_ln_tau);
  Parts parts;
  parts.add("60", t.Q(n) * t.P(n) - s.qtilde * s.ptilde);
  parts.add("58-tilde", b2 - 2.0 * (2.0 * s.qtilde * s.ptilde - n));
  parts.add("58-v", b2 - 2.0 * b_minus1_v(s));
  parts.add("61", analytic - (2.0 * b0_v(s) + 2.0 * s.ptilde * b_minus1_qtilde(s) -
                              2.0 * s.qtilde * b_minus1_ptilde(s)));
  return parts.report("E12", c, identity_tolerance("E12"));
}

IdentityReport e13(const Context& c) {
  const int n = c.n();
  const auto t = c.tau(c.set());
  const auto s = c.tw(c.set());
  const double q = t.Q(n), p = t.P(n);
  const double qt = s.qtilde, pt = s.ptilde;
  const double target = 4.0 * (n - 2.0 * q * p);

  const auto Q = c.q_ratio(), P = c.p_ratio(), Qt = c.q_tilde(), Pt = c.p_tilde();
  const double bq = c.b1(Q), bp = c.b1(P);
  const double b2q = c.b2(Q), b2p = c.b2(P), b2qt = c.b2(Qt), b2pt = c.b2(Pt);
  const double bqt = b_minus1_qtilde(s), bpt = b_minus1_ptilde(s);
  const SetFunction qp = [&](const IntervalSet& j) {
    const auto tj = c.tau(j);
    return tj.Q(n) * tj.P(n);
  };
  const SetFunction qp_tilde = [&](const IntervalSet& j) {
    const auto sj = c.tw(j);
    return sj.qtilde * sj.ptilde;
  };

  Parts parts;
  parts.add("62-Q", (b2q + 2.0 * c.b1(Q, 0)) / q - target);
  parts.add("62-Qtilde", (b2qt + 2.0 * c.b1(Qt, 0)) / qt - target);
  parts.add("62-P", (b2p - 2.0 * c.b1(P, 0)) / p - target);
  parts.add("62-Ptilde", (b2pt - 2.0 * c.b1(Pt, 0)) / pt - target);
  // B_{-1} F = P B^2 Q - Q B^2 P once the first-derivative products cancel.
  parts.add("63", p * b2q - q * b2p + 2.0 * c.b1(qp, 0));
  parts.add("63-tilde", pt * b2qt - qt * b2pt + 2.0 * c.b1(qp_tilde, 0));
  parts.add("64", (p * bq - q * bp) - (pt * bqt - qt * bpt));
  parts.add("66", bqt / qt - bq / q);
  parts.add("67", bpt / pt - bp / p);
  parts.note("67-as-printed", bpt / pt - bq / q);
  return parts.report("E13", c, identity_tolerance("E13"));
}

IdentityReport e14(const Context& c) {
  const int n = c.n();
  const auto t = c.tau(c.set());
  const auto s = c.tw(c.set());
  const double cn = c_n(n);
  Parts parts;
  parts.add("Qtilde", s.qtilde - cn * t.Q(n));
  parts.add("Ptilde", s.ptilde - t.P(n) / cn);
  parts.note("Ptilde*C_n-Q_n", s.ptilde * cn - t.Q(n));
  return parts.report("E14", c, identity_tolerance("E14"), {{"C_n", cn}});
}

}  // namespace

std::vector<double> rebuild_q_ratios(const IntervalSet& set, int up_to,
                                     const VerifyOptions& options) {
  if (up_to < 1) throw Error(ErrorKind::InvalidArgument, "rebuild needs up_to >= 1");
  const Context c(std::max(1, up_to - 1), set, options);
  const auto hankel = [&](int m) -> SetFunction {
    return [&c, m](const IntervalSet& j) { return c.tau(j).Q(m); };
  };
  std::vector<SetFunction> q{hankel(0), hankel(1)};
  for (int m = 1; m < up_to; ++m) {
    q.push_back([&c, &q, m](const IntervalSet& j) {
      const double qm = q[m](j);
      const double b2 = boundary_op_squared(
          -1, [&](const IntervalSet& k) { return std::log(q[m](k)); }, j, c.steps().second,
          c.steps().second_levels);
      return qm * (b2 / 4.0 + qm / q[m - 1](j) + 0.5);
    });
  }
  std::vector<double> out;
  for (const auto& f : q) out.push_back(f(set));
  return out;
}

double identity_tolerance(const std::string& id) {
  static const std::map<std::string, double> table{
      {"E1", 1e-6},  {"E2", 1e-6},  {"E3", 1e-6},  {"E4", 1e-8},  {"E5", 1e-7},
      {"E6", 1e-6},  {"E7", 1e-6},  {"E8", 1e-6},  {"E9", 1e-6},  {"E10", 1e-4},
      {"E11", 1e-8}, {"E12", 1e-8}, {"E13", 1e-6}, {"E14", 1e-7}, {"A3", 1e-9},
      {"A6", 1e-8},  {"A7", 1e-6},  {"A8", 1e-6},  {"A9", 1e-6},  {"A10", 1e-6},
      {"A11", 1e-6}, {"A12", 1e-6}, {"A13", 1e-4}, {"A34", 1e-4}};
  const auto it = table.find(id);
  if (it == table.end()) throw Error(ErrorKind::UnknownIdentity, "unknown identity '" + id + "'");
  return it->second;
}

IdentityReport verify(const std::string& id, int n, const IntervalSet& set,
                      const VerifyOptions& options) {
  using Check = IdentityReport (*)(const Context&);
  static const std::map<std::string, Check> checks{
      {"E1", e1},
      {"E2", [](const Context& c) { return e2_e3(c, true); }},
      {"E3", [](const Context& c) { return e2_e3(c, false); }},
      {"E4", e4},
      {"E5", e5},
      {"E6", e6},
      {"E7", e7},
      {"E8", e8},
      {"E9", e9},
      {"E10", e10},
      {"E11", e11},
      {"E12", e12},
      {"E13", e13},
      {"E14", e14}};
  const auto it = checks.find(id);
  if (it == checks.end()) {
    throw Error(ErrorKind::UnknownIdentity, "unknown main-text identity '" + id + "'");
  }
  const Context ctx(n, set, options);
  return it->second(ctx);
}

}  // namespace todatw
