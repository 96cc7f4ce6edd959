#pragma once

#include <vector>

#include "todatw/domain.hpp"
#include "todatw/numerics.hpp"

namespace todatw {

struct TauOptions {
  int points_per_panel = 48;
  /// <= 0 selects default_truncation(n_max + 1, J).
  double truncation_L = 0.0;
  double max_panel_width = 8.0;
  /// Widen the truncation for the deformed weight. Off means truncation_L is
  /// used as given, which keeps the node layout fixed across a stencil.
  bool deform_truncation = true;
};

/// tau_m^J(t) = (1/m!) int_{J^m} Delta_m(x)^2 prod rho_t(x_i) dx_i for
/// m = 0 .. n_max + 1, all from one Gram matrix.
///
/// The Gram matrix is assembled in the orthonormal Hermite basis,
///   G_ij = int_J phi_i phi_j exp(t1 x + t2 x^2 + t3 x^3) dx,
/// so that G = I on the real line at t = 0. tau_m is the m-th leading
/// principal minor of G times prod_{k<m} 2^{-k} k! sqrt(pi), the inverse
/// squared leading coefficients of the phi_k. Everything is held in the log
/// domain; ratios never underflow.
class TauTable {
 public:
  static TauTable build(int n_max, const IntervalSet& set, const Times& t = {},
                        const TauOptions& options = {});

  int n_max() const noexcept { return static_cast<int>(log_tau_.size()) - 2; }
  const IntervalSet& set() const noexcept { return set_; }
  const Times& times() const noexcept { return times_; }

  /// 0 <= n <= n_max + 1; tau_0 = 1.
  double log_tau(int n) const;
  double tau(int n) const;
  /// Q_n = tau_{n+1} / tau_n, 0 <= n <= n_max.
  double Q(int n) const;
  /// P_n = tau_{n-1} / tau_n, 1 <= n <= n_max + 1.
  double P(int n) const;

 private:
  IntervalSet set_;
  Times times_;
  std::vector<double> log_tau_;
};

double log_tau_hankel(int n, const IntervalSet& set, const Times& t = {},
                      const TauOptions& options = {});
double tau_hankel(int n, const IntervalSet& set, const Times& t = {},
                  const TauOptions& options = {});

/// Full-line value at t = 0: pi^{n/2} 2^{-n(n-1)/2} prod_{j<n} j!.
double tau_closed_form(int n);
double log_tau_closed_form(int n);

struct TauRatios {
  double Q;
  double P;
};

/// (Q_n, P_n) at t = 0; requires n >= 1.
TauRatios tau_ratios(int n, const IntervalSet& set, const TauOptions& options = {});

/// tau_n^J / tau_n: the probability that all eigenvalues lie in J.
double gap_probability_hankel(int n, const IntervalSet& set, const TauOptions& options = {});

enum class TauQuantity { LogTau, LogQ, LogP };
enum class TimeDerivative { T1, T1T1, T2, T1T2 };

/// Derivative at t = 0 of log tau_n, log Q_n or log P_n in the deformation
/// times, by Richardson-extrapolated central differences of step h. Throws
/// Error(InvalidStep) for h outside [1e-6, 1e-1].
double time_derivative(int n, const IntervalSet& set, TauQuantity quantity,
                       TimeDerivative which, double h, const TauOptions& options = {});

}  // namespace todatw
