#pragma once

#include <span>
#include <vector>

namespace todatw {

/// Orthonormal Hermite functions
///   phi_k(x) = H_k(x) exp(-x^2/2) / sqrt(2^k k! sqrt(pi)),
/// evaluated by the upward three-term recurrence with the Gaussian factor
/// folded into the starting values.
class HermiteBasis {
 public:
  explicit HermiteBasis(int n_max);

  int n_max() const noexcept { return n_max_; }
  /// Throws Error(InvalidArgument) for k outside [0, n_max].
  double phi(int k, double x) const;
  /// phi_0(x) .. phi_{n_max}(x) into out (size n_max + 1).
  void values(double x, std::span<double> out) const;

 private:
  int n_max_;
};

/// phi_0(x) .. phi_{count-1}(x).
std::vector<double> hermite_functions(int count, double x);
double hermite_phi(int k, double x);
/// phi_k'(x) = -x phi_k(x) + sqrt(2k) phi_{k-1}(x).
double hermite_phi_derivative(int k, double x);

/// The pair (phi, psi) = sqrt(b_{n-1}) (phi_n, phi_{n-1}) with
/// b_{n-1} = sqrt(n/2) the off-diagonal recurrence coefficient.
struct PhiPair {
  double phi;
  double psi;
};

PhiPair phi_pair(int n, double x);
/// Derivatives: phi' = -x phi + sqrt(2n) psi, psi' = x psi - sqrt(2n) phi.
PhiPair phi_pair_derivative(int n, double x);

/// Christoffel-Darboux kernel in divided-difference form; for |x - y| < 1e-6
/// the diagonal limit phi'psi - psi'phi plus a first-order Taylor correction.
double cd_kernel(int n, double x, double y);
/// The same kernel as the explicit sum over phi_k(x) phi_k(y), k < n.
double kernel_sum(int n, double x, double y);
/// d/dx of kernel_sum.
double kernel_sum_dx(int n, double x, double y);

}  // namespace todatw
