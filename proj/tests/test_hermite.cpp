#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "todatw/hermite.hpp"
#include "todatw/numerics.hpp"

using namespace todatw;

namespace {

double integrate_line(const std::function<double(double)>& f) {
  return integrate_on_set(f, IntervalSet::real_line(), PanelScheme{48, 14.0, 4.0});
}

}  // namespace

TEST_CASE("Hermite functions are orthonormal") {
  for (int j = 0; j < 10; ++j) {
    for (int k = j; k < 10; ++k) {
      const double ip = integrate_line([&](double x) { return hermite_phi(j, x) * hermite_phi(k, x); });
      CHECK(ip == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("explicit low-order values") {
  const double c0 = std::pow(std::numbers::pi, -0.25);
  CHECK(hermite_phi(0, 0.3) == doctest::Approx(c0 * std::exp(-0.045)).epsilon(1e-15));
  CHECK(hermite_phi(1, 0.3) ==
        doctest::Approx(c0 * std::sqrt(2.0) * 0.3 * std::exp(-0.045)).epsilon(1e-15));
  // large argument: no overflow in the recurrence
  CHECK(std::isfinite(hermite_phi(30, 25.0)));
  CHECK(std::abs(hermite_phi(30, 25.0)) < 1e-100);
}

TEST_CASE("derivative formula agrees with differencing") {
  for (int k : {0, 1, 4, 9}) {
    for (double x : {-2.3, 0.0, 0.7, 3.1}) {
      const double fd = fd_first([&](double s) { return hermite_phi(k, x + s); }, 1e-3);
      CHECK(hermite_phi_derivative(k, x) == doctest::Approx(fd).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("Christoffel-Darboux form equals the direct sum") {
  for (int n : {1, 2, 5, 8}) {
    for (double x : {-2.0, -0.3, 0.0, 1.7}) {
      for (double y : {-1.1, 0.0, 0.4, 1.7, x + 1e-8, x + 3e-7}) {
        CHECK(cd_kernel(n, x, y) == doctest::Approx(kernel_sum(n, x, y)).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("kernel reproduces and projects") {
  const int n = 4;
  const double y = 0.6;
  // int K(x, x) dx = n
  CHECK(integrate_line([&](double x) { return kernel_sum(n, x, x); }) ==
        doctest::Approx(n).epsilon(1e-13));
  // int K(y, x) K(x, z) dx = K(y, z)
  const double z = -0.8;
  CHECK(integrate_line([&](double x) { return kernel_sum(n, y, x) * kernel_sum(n, x, z); }) ==
        doctest::Approx(kernel_sum(n, y, z)).epsilon(1e-13));
}

TEST_CASE("phi and psi satisfy their first-order system") {
  for (int n : {1, 3, 6}) {
    for (double x : {-1.5, 0.2, 2.0}) {
      const auto d = phi_pair_derivative(n, x);
      const double dphi = fd_first([&](double s) { return phi_pair(n, x + s).phi; }, 1e-3);
      const double dpsi = fd_first([&](double s) { return phi_pair(n, x + s).psi; }, 1e-3);
      CHECK(d.phi == doctest::Approx(dphi).epsilon(1e-10).scale(1.0));
      CHECK(d.psi == doctest::Approx(dpsi).epsilon(1e-10).scale(1.0));
      // K(x, x) = phi' psi - psi' phi
      const auto v = phi_pair(n, x);
      CHECK(d.phi * v.psi - d.psi * v.phi == doctest::Approx(kernel_sum(n, x, x)).epsilon(1e-13));
    }
  }
}
