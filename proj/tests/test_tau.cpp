#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "todatw/error.hpp"
#include "todatw/fredholm.hpp"
#include "todatw/numerics.hpp"
#include "todatw/tau.hpp"

using namespace todatw;

TEST_CASE("full-line tau matches the closed form") {
  for (int n = 1; n <= 8; ++n) {
    const double got = tau_hankel(n, IntervalSet::real_line());
    CHECK(std::abs(got / tau_closed_form(n) - 1.0) < 1e-11);
  }
  CHECK(tau_closed_form(2) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
}

TEST_CASE("tau_2 from a two-dimensional integral") {
  const auto set = IntervalSet::parse("-1.5:0.25");
  const PanelScheme scheme{48, 10.0, 8.0};
  const auto g = composite_nodes(set, scheme);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double x = g.nodes[i], y = g.nodes[j];
      acc += g.weights[i] * g.weights[j] * (x - y) * (x - y) * std::exp(-x * x - y * y);
    }
  }
  CHECK(tau_hankel(2, set) == doctest::Approx(0.5 * acc).epsilon(1e-13));
}

TEST_CASE("ratios on the real line and the first ratio") {
  for (int n = 1; n <= 6; ++n) {
    const auto r = tau_ratios(n, IntervalSet::real_line());
    CHECK(r.Q * r.P == doctest::Approx(n / 2.0).epsilon(1e-10));
  }
  const auto set = IntervalSet::parse("-1:1");
  const auto t = TauTable::build(2, set);
  CHECK(t.P(1) == doctest::Approx(1.0 / (std::sqrt(std::numbers::pi) * std::erf(1.0))).epsilon(1e-13));
  CHECK(t.Q(0) == doctest::Approx(std::sqrt(std::numbers::pi) * std::erf(1.0)).epsilon(1e-13));
}

TEST_CASE("Hankel and Fredholm routes agree") {
  for (int n = 1; n <= 6; ++n) {
    for (const char* J : {"-1:1", "-inf:0.5", "-2:-0.5,0.5:2", "-1.5:0.25"}) {
      const auto set = IntervalSet::parse(J);
      CHECK(std::abs(gap_probability_hankel(n, set) -
                     fredholm_det(NystromSystem::build(n, set))) < 1e-8);
    }
  }
}

TEST_CASE("deep gaps stay finite in the log domain") {
  const auto t = TauTable::build(12, IntervalSet::parse("-1:1"));
  CHECK(std::isfinite(t.log_tau(13)));
  CHECK(t.log_tau(13) < -100.0);
  CHECK(std::isfinite(t.Q(12)));
  CHECK(t.Q(12) > 0.0);
}

TEST_CASE("time derivatives") {
  const auto set = IntervalSet::parse("-1:1");
  const auto r = tau_ratios(2, set);
  const double d11 = time_derivative(2, set, TauQuantity::LogTau, TimeDerivative::T1T1, 1e-2);
  CHECK(std::abs(d11 - r.Q * r.P) < 1e-7);
  // symmetric window: odd derivative vanishes
  CHECK(std::abs(time_derivative(1, IntervalSet::real_line(), TauQuantity::LogTau,
                                 TimeDerivative::T1, 1e-3)) < 1e-12);
  CHECK_THROWS_AS(
      time_derivative(2, set, TauQuantity::LogTau, TimeDerivative::T1, 0.5), Error);
  CHECK_THROWS_AS(
      time_derivative(2, set, TauQuantity::LogTau, TimeDerivative::T1, 1e-7), Error);
}

TEST_CASE("second time derivative is flat in the step on a deep gap") {
  // P_4 ~ 1e2 here; double-precision Gram rounding used to show up as 3e-9
  // wobble across these steps
  const auto set = IntervalSet::parse("-1.5:0.25");
  double lo = 1.0, hi = -1.0;
  for (double h = 0.016; h < 0.045; h += 0.004) {
    const double d = time_derivative(4, set, TauQuantity::LogP, TimeDerivative::T1T1, h);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  CHECK(hi - lo < 3e-10);
}

TEST_CASE("pinned truncation is used as given") {
  TauOptions o;
  o.truncation_L = 9.0;
  o.deform_truncation = false;
  const auto line = IntervalSet::real_line();
  const auto a = TauTable::build(2, line, Times{0.3, 0.0, 0.0}, o);
  o.deform_truncation = true;
  const auto b = TauTable::build(2, line, Times{0.3, 0.0, 0.0}, o);
  CHECK(std::abs(a.log_tau(2) - b.log_tau(2)) < 1e-12);
}
