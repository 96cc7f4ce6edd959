#include <doctest.h>

#include <cmath>

#include "todatw/error.hpp"
#include "todatw/fredholm.hpp"
#include "todatw/tw_system.hpp"

using namespace todatw;

namespace {

const char* const kSets[] = {"-1:1", "-1.5:0.25", "-2:-1,1:2", "-inf:0.5", "-2:-0.5,0.5:2"};

}  // namespace

TEST_CASE("endpoint equations hold with the orientation sign") {
  for (int n = 1; n <= 4; ++n) {
    for (const char* J : kSets) {
      CAPTURE(n);
      CAPTURE(J);
      const auto s = compute_tw_state(n, IntervalSet::parse(J));
      const auto d = endpoint_derivatives(s, 1e-3);
      for (const auto& [key, r] : check_universal(s, d)) {
        CAPTURE(key);
        CHECK(r < 1e-6);
      }
      for (const auto& [key, r] : check_gaussian(s, d)) {
        CAPTURE(key);
        if (key == "49-flipped") continue;
        CHECK(r < 1e-6);
      }
    }
  }
}

TEST_CASE("sign bootstrap: only one cross-term sign survives") {
  // the two endpoints of a bounded window see each other; the flipped sum
  // must fail by a visible margin
  for (const char* J : {"-1:1", "-2:-1,1:2"}) {
    const auto s = compute_tw_state(2, IntervalSet::parse(J));
    const auto g = check_gaussian(s, 1e-3);
    CHECK(g.at("49") < 1e-8);
    CHECK(g.at("49-flipped") > 1e-2);
  }
  // d ln det / d a_k = -e_k R(a_k, a_k): probability grows as J widens
  for (const char* J : {"-1:1", "-inf:0.5"}) {
    const auto set = IntervalSet::parse(J);
    const auto s = compute_tw_state(3, set);
    for (std::size_t k = 0; k < s.size(); ++k) {
      auto shifted = [&](double h) {
        auto ends = set.finite_endpoints();
        ends[k] += h;
        return fredholm_log_det(NystromSystem::build(3, set.with_finite_endpoints(ends)));
      };
      const double fd = (shifted(1e-4) - shifted(-1e-4)) / 2e-4;
      CHECK(fd == doctest::Approx(-s.orientation(k) * s.r(k, k)).epsilon(1e-6));
      CHECK(fd * s.orientation(k) < 0.0);
    }
  }
}

TEST_CASE("resolvent kernel at endpoints: three routes") {
  for (const char* J : kSets) {
    const auto s = compute_tw_state(3, IntervalSet::parse(J));
    for (std::size_t j = 0; j < s.size(); ++j) {
      CHECK(s.r(j, j) == doctest::Approx(r_diag_gaussian(s, j)).epsilon(1e-9));
      for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s.r(j, k) == doctest::Approx(s.r_direct(j, k)).epsilon(1e-9).scale(1.0));
      }
    }
    CHECK(std::abs(first_integral_residual(s)) < 1e-10);
    CHECK(std::abs(s.v - s.v_alt) < 1e-12);
  }
}

TEST_CASE("flow reproduces erf for n = 1") {
  const auto pts = tw_flow_at(1, {2.0, 1.0, 0.5});
  REQUIRE(pts.size() == 3);
  for (const auto& p : pts) {
    CHECK(std::exp(p.log_det) == doctest::Approx(0.5 * (1.0 + std::erf(p.a))).epsilon(1e-10));
  }
}

TEST_CASE("flow conserves its first integral") {
  for (int n = 1; n <= 4; ++n) {
    const double root = std::sqrt(2.0 * n);
    for (const auto& p : integrate_tw_flow(n, flow_start(n), -3.0, 60)) {
      // single edge, orientation -1: S_0 = 2 q p
      const double fi = 2.0 * root * (p.u - p.w) + 4.0 * p.u * p.w - 2.0 * p.q * p.p;
      CHECK(std::abs(fi) < 1e-8 * std::max(1.0, std::abs(p.w)));
    }
  }
}

TEST_CASE("flow agrees with the resolvent where the latter is resolvable") {
  const int n = 2;
  std::vector<double> grid;
  for (double a = 3.0; a >= -1.0; a -= 0.5) grid.push_back(a);
  for (const auto& p : tw_flow_at(n, grid)) {
    const auto s = compute_tw_state(n, IntervalSet(std::vector<Interval>{{-INFINITY, p.a}}));
    CHECK(p.u == doctest::Approx(s.u).epsilon(1e-8).scale(1.0));
    CHECK(p.w == doctest::Approx(s.w).epsilon(1e-8).scale(1.0));
    CHECK(p.log_det == doctest::Approx(s.log_det).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("input contracts") {
  CHECK_THROWS_AS(compute_tw_state(2, IntervalSet::real_line()), Error);
  CHECK_THROWS_AS(integrate_tw_flow(2, 1.0, -1.0, 10), Error);
  const auto s = compute_tw_state(2, IntervalSet::parse("-0.1:0.1"));
  CHECK_THROWS_AS(check_universal(s, 0.1), Error);
}
