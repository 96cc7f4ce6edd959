#include "todatw/hermite.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "todatw/error.hpp"

namespace todatw {

namespace {

constexpr double kNearDiagonal = 1e-6;

void fill_hermite(double x, std::span<double> out) {
  if (out.empty()) return;
  // pi^{-1/4}
  static const double kPhi0 = std::pow(std::numbers::pi, -0.25);
  out[0] = kPhi0 * std::exp(-0.5 * x * x);
  if (out.size() == 1) return;
  out[1] = std::numbers::sqrt2 * x * out[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * x * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
  }
}

void require_size(int n) {
  if (n < 1) {
    throw Error(ErrorKind::InvalidArgument, "matrix size n must be >= 1, got " + std::to_string(n));
  }
}

}  // namespace

HermiteBasis::HermiteBasis(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be nonnegative");
}

double HermiteBasis::phi(int k, double x) const {
  if (k < 0 || k > n_max_) {
    throw Error(ErrorKind::InvalidArgument,
                "Hermite index " + std::to_string(k) + " outside [0, " + std::to_string(n_max_) + "]");
  }
  return hermite_phi(k, x);
}

void HermiteBasis::values(double x, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(n_max_ + 1)) {
    throw Error(ErrorKind::InvalidArgument, "output span must hold n_max + 1 values");
  }
  fill_hermite(x, out);
}

std::vector<double> hermite_functions(int count, double x) {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  fill_hermite(x, out);
  return out;
}

double hermite_phi(int k, double x) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "Hermite index must be nonnegative");
  return hermite_functions(k + 1, x)[k];
}

double hermite_phi_derivative(int k, double x) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "Hermite index must be nonnegative");
  const auto v = hermite_functions(k + 1, x);
  return -x * v[k] + (k > 0 ? std::sqrt(2.0 * k) * v[k - 1] : 0.0);
}

PhiPair phi_pair(int n, double x) {
  require_size(n);
  const auto v = hermite_functions(n + 1, x);
  const double scale = std::pow(0.5 * n, 0.25);  // sqrt(b_{n-1})
  return {scale * v[n], scale * v[n - 1]};
}

PhiPair phi_pair_derivative(int n, double x) {
  const auto [phi, psi] = phi_pair(n, x);
  const double c = std::sqrt(2.0 * n);
  return {-x * phi + c * psi, x * psi - c * phi};
}

double cd_kernel(int n, double x, double y) {
  require_size(n);
  if (std::abs(x - y) < kNearDiagonal) {
    // Diagonal form at the midpoint; the first-order Taylor term about x
    // is exactly this shift.
    const double m = 0.5 * (x + y);
    const auto f = phi_pair(n, m);
    const auto df = phi_pair_derivative(n, m);
    return df.phi * f.psi - df.psi * f.phi;
  }
  const auto fx = phi_pair(n, x);
  const auto fy = phi_pair(n, y);
  return (fx.phi * fy.psi - fx.psi * fy.phi) / (x - y);
}

double kernel_sum(int n, double x, double y) {
  require_size(n);
  const auto vx = hermite_functions(n, x);
  const auto vy = hermite_functions(n, y);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += vx[k] * vy[k];
  return sum;
}

double kernel_sum_dx(int n, double x, double y) {
  require_size(n);
  const auto vx = hermite_functions(n, x);
  const auto vy = hermite_functions(n, y);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = -x * vx[k] + (k > 0 ? std::sqrt(2.0 * k) * vx[k - 1] : 0.0);
    sum += d * vy[k];
  }
  return sum;
}

}  // namespace todatw
