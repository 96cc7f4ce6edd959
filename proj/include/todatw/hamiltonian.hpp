#pragma once

#include <array>
#include <vector>

#include "todatw/boundary.hpp"
#include "todatw/tw_system.hpp"

namespace todatw {

/// Canonical variables as real quadratic monomials. X_j = 2 q_j and
/// Y_j = p_j carry a factor i at every endpoint where J lies to the right
/// (orientation +1), so X_j^2 = -4 e_j q_j^2, Y_j^2 = -e_j p_j^2 and
/// X_j Y_j = -2 e_j q_j p_j. No complex number is ever formed.
struct CanonicalState {
  int n = 0;
  std::vector<double> a;
  std::vector<double> Xsq, Ysq, XY;
  double u = 0.0;
  double w = 0.0;
  double utilde = 0.0;  // sqrt(2n) - 2u
  double wtilde = 0.0;  // sqrt(2n) + 2w

  std::size_t size() const noexcept { return a.size(); }
  /// (X_j Y_k - Y_j X_k)^2 expanded in stored monomials.
  double cross(std::size_t j, std::size_t k) const {
    return Xsq[j] * Ysq[k] + Ysq[j] * Xsq[k] - 2.0 * XY[j] * XY[k];
  }
};

CanonicalState canonical_from_tw(const TWState& state);

/// Power-weighted sums Q_k = sum a^k X^2, P_k = sum a^k Y^2,
/// S_k = sum a^k XY for k = 0..3.
struct MomentSums {
  std::array<double, 4> Q{}, P{}, S{};
};

MomentSums moment_sums(const CanonicalState& cs);

/// G_j = -a_j XY_j + utilde Y_j^2 + wtilde X_j^2 / 4
///       - 1/4 sum_{k != j} (X_j Y_k - Y_j X_k)^2 / (a_j - a_k).
/// Throws Error(SingularConfiguration) for coincident endpoints.
std::vector<double> hamiltonians(const CanonicalState& cs);

/// Closed forms of R_0^H, R_1^H, R_2^H in moment sums, and of the derived
/// second and fourth boundary derivatives of ln tau.
struct AppendixForms {
  double r0, r1, r2;          // B_{-1}, B_0, B_1 of ln tau
  double bm1_sq;              // B_{-1}^2 = -S_0
  double bm1_b1;              // B_{-1} B_1
  double b0_sq;               // B_0^2
  double bm1_fourth;          // B_{-1}^4
  double first_integral;      // 2 sqrt(2n)(u - w) + 4uw - S_0
};

AppendixForms appendix_forms(const CanonicalState& cs);

/// Appendix chain "A3", "A6" .. "A13", "A34" on one configuration.
std::vector<IdentityReport> verify_appendix(int n, const IntervalSet& set,
                                            const VerifyOptions& options = {});

/// One appendix entry.
IdentityReport verify_appendix_identity(const std::string& identity, int n,
                                        const IntervalSet& set,
                                        const VerifyOptions& options = {});

}  // namespace todatw
