#include <doctest.h>

#include <cmath>
#include <numbers>

#include "todatw/error.hpp"
#include "todatw/numerics.hpp"

using namespace todatw;

TEST_CASE("erf against reference values") {
  // mpmath, 30 digits
  CHECK(special::erf(0.5) == doctest::Approx(0.520499877813046537682746653892).epsilon(1e-15));
  CHECK(special::erf(1.0) == doctest::Approx(0.842700792949714869341220635083).epsilon(1e-15));
  CHECK(special::erf(2.0) == doctest::Approx(0.995322265018952734162069256367).epsilon(1e-15));
  CHECK(special::erfc(5.0) == doctest::Approx(1.53745979442803485018834348538e-12).epsilon(1e-14));
  CHECK(special::erf(-1.0) == -special::erf(1.0));
  CHECK(special::erf(0.0) == 0.0);
}

TEST_CASE("erf matches the C library across the series/fraction switch") {
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    const double ref = std::erf(x);
    CHECK(std::abs(special::erf(x) - ref) <= 1e-15 * std::max(1.0, std::abs(ref)));
  }
  for (double x = 2.6; x < 20.0; x += 0.37) {
    CHECK(special::erfc(x) == doctest::Approx(std::erfc(x)).epsilon(1e-13));
  }
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int m : {1, 2, 5, 16, 48, 100}) {
    const auto rule = gauss_legendre(m);
    double total = 0.0;
    for (double w : rule->weights) total += w;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    for (int p = 0; p <= 2 * m - 1; p += 2) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += rule->weights[i] * std::pow(rule->nodes[i], p);
      CHECK(acc == doctest::Approx(2.0 / (p + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("composite rule on a union with an infinite end") {
  const auto set = IntervalSet::parse("-inf:-1,0.5:2");
  PanelScheme scheme{32, 12.0, 4.0};
  for (const auto& p : scheme.panels_for(set)) CHECK(p.hi - p.lo <= 4.0 + 1e-12);
  const double got = integrate_on_set([](double x) { return std::exp(-x * x); }, set, scheme);
  const double ref = 0.5 * std::sqrt(std::numbers::pi) *
                     (std::erfc(1.0) + std::erf(2.0) - std::erf(0.5));
  CHECK(got == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("Gaussian moments against closed forms") {
  PanelScheme scheme{48, 12.0, 8.0};
  const auto line = IntervalSet::real_line();
  CHECK(gaussian_moment(0, line, {}, scheme) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gaussian_moment(2, line, {}, scheme) ==
        doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
  // completing the square: t1 shifts the centre
  const Times t{0.4, 0.0, 0.0};
  CHECK(gaussian_moment(0, line, t, scheme) ==
        doctest::Approx(std::sqrt(std::numbers::pi) * std::exp(0.04)).epsilon(1e-14));
  CHECK_THROWS_AS(check_weight_integrable(line, Times{0.0, 1.5, 0.0}), Error);
  CHECK_THROWS_AS(check_weight_integrable(line, Times{0.0, 0.0, 0.1}), Error);
  CHECK_NOTHROW(check_weight_integrable(IntervalSet::parse("-1:1"), Times{0.0, 0.0, 0.1}));
}

TEST_CASE("finite differences and Richardson levels") {
  const auto f = [](double s) { return std::exp(0.7 * s) + std::sin(s); };
  CHECK(fd_first(f, 1e-3) == doctest::Approx(1.7).epsilon(1e-11));
  CHECK(fd_second(f, 1e-2) == doctest::Approx(0.49).epsilon(1e-9));
  const double one = std::abs(fd_second(f, 0.2, 1) - 0.49);
  const double two = std::abs(fd_second(f, 0.2, 2) - 0.49);
  CHECK(two < one / 20.0);
  CHECK(fd_fourth(f, 5e-2) == doctest::Approx(0.7 * 0.7 * 0.7 * 0.7).epsilon(1e-6));
  const auto g = [](double s, double r) { return std::exp(s * r + s); };
  CHECK(fd_mixed(g, 1e-2, 1e-2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(fd_first(f, 1e-3, -1), Error);
}
