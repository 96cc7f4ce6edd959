#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace todatw {

/// Open interval (lo, hi); lo may be -inf and hi may be +inf.
struct Interval {
  double lo;
  double hi;

  bool operator==(const Interval&) const = default;
};

/// Ordered disjoint union of open intervals, kept in canonical form:
/// strictly increasing, non-overlapping, touching intervals merged.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet real_line();
  /// Parses `lo:hi[,lo:hi...]` with `-inf`/`inf` allowed. Throws Error(Parse).
  static IntervalSet parse(std::string_view text);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool empty() const noexcept { return intervals_.empty(); }
  bool is_real_line() const noexcept;
  bool contains(double x) const noexcept;

  /// Finite endpoints in ascending order.
  std::vector<double> finite_endpoints() const;
  /// Same shape, finite endpoints replaced in order. The result is validated.
  IntervalSet with_finite_endpoints(std::span<const double> values) const;
  /// Smallest gap between consecutive finite endpoints (+inf if fewer than two).
  double min_endpoint_gap() const;
  double max_abs_finite_endpoint() const;

  /// Round-trippable text form, e.g. `-inf:-1,1:inf`.
  std::string to_string() const;

  bool operator==(const IntervalSet&) const = default;

 private:
  std::vector<Interval> intervals_;
};

IntervalSet complement(const IntervalSet& set);

/// A finite endpoint of J.
///
/// `index` is the 1-based position among the ascending finite endpoints and
/// `sign` = (-1)^index. `orientation` is the sign that multiplies the
/// boundary terms of the resolvent equations: +1 when J lies to the right of
/// the endpoint (a left endpoint of J), -1 when J lies to its left. It
/// coincides with `sign` when J starts at -inf and with `-sign` otherwise.
struct SignedEndpoint {
  double value;
  int index;
  int sign;
  int orientation;
};

std::vector<SignedEndpoint> signed_endpoints(const IntervalSet& set);

/// Locale-independent shortest round-trip formatting ("inf", "-inf" for
/// infinities).
std::string format_shortest(double x);
/// `%.<digits>g`-style, locale-independent.
std::string format_general(double x, int digits = 12);

}  // namespace todatw
