#include "todatw/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "todatw/error.hpp"

namespace todatw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_bound(std::string_view s) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(value)) {
    throw Error(ErrorKind::Parse, "cannot parse interval bound '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi) || iv.lo == kInf ||
        iv.hi == -kInf) {
      throw Error(ErrorKind::InvalidArgument,
                  "interval (" + format_shortest(iv.lo) + ", " + format_shortest(iv.hi) +
                      ") is empty or malformed");
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
}

IntervalSet IntervalSet::real_line() { return IntervalSet({{-kInf, kInf}}); }

IntervalSet IntervalSet::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error(ErrorKind::Parse, "empty interval specification");
  std::vector<Interval> parts;
  for (bool more = true; more;) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    more = comma != std::string_view::npos;
    if (more) text = text.substr(comma + 1);
    if (item.empty()) throw Error(ErrorKind::Parse, "empty interval in list");
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::Parse, "interval '" + std::string(item) + "' lacks ':'");
    }
    const double lo = parse_bound(item.substr(0, colon));
    const double hi = parse_bound(item.substr(colon + 1));
    if (!(lo < hi)) {
      throw Error(ErrorKind::Parse, "interval '" + std::string(item) + "' has lo >= hi");
    }
    parts.push_back({lo, hi});
  }
  return IntervalSet(std::move(parts));
}

bool IntervalSet::is_real_line() const noexcept {
  return intervals_.size() == 1 && intervals_[0].lo == -kInf && intervals_[0].hi == kInf;
}

bool IntervalSet::contains(double x) const noexcept {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.lo < x && x < iv.hi; });
}

std::vector<double> IntervalSet::finite_endpoints() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) {
    if (std::isfinite(iv.lo)) out.push_back(iv.lo);
    if (std::isfinite(iv.hi)) out.push_back(iv.hi);
  }
  return out;
}

IntervalSet IntervalSet::with_finite_endpoints(std::span<const double> values) const {
  std::vector<Interval> out = intervals_;
  std::size_t i = 0;
  for (auto& iv : out) {
    for (double* end : {&iv.lo, &iv.hi}) {
      if (!std::isfinite(*end)) continue;
      if (i >= values.size()) {
        throw Error(ErrorKind::InvalidArgument, "too few endpoint values");
      }
      *end = values[i++];
    }
  }
  if (i != values.size()) throw Error(ErrorKind::InvalidArgument, "too many endpoint values");
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!(values[k] < values[k + 1])) {
      throw Error(ErrorKind::InvalidStep, "endpoint perturbation collides endpoints");
    }
  }
  IntervalSet result;
  result.intervals_ = std::move(out);
  return result;
}

double IntervalSet::min_endpoint_gap() const {
  const auto ends = finite_endpoints();
  double gap = kInf;
  for (std::size_t k = 0; k + 1 < ends.size(); ++k) gap = std::min(gap, ends[k + 1] - ends[k]);
  return gap;
}

double IntervalSet::max_abs_finite_endpoint() const {
  double m = 0.0;
  for (double a : finite_endpoints()) m = std::max(m, std::abs(a));
  return m;
}

std::string IntervalSet::to_string() const {
  std::string out;
  for (const auto& iv : intervals_) {
    if (!out.empty()) out += ',';
    out += format_shortest(iv.lo);
    out += ':';
    out += format_shortest(iv.hi);
  }
  return out;
}

IntervalSet complement(const IntervalSet& set) {
  std::vector<Interval> out;
  double cursor = -kInf;
  for (const auto& iv : set.intervals()) {
    if (cursor < iv.lo) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < kInf) out.push_back({cursor, kInf});
  return IntervalSet(std::move(out));
}

std::vector<SignedEndpoint> signed_endpoints(const IntervalSet& set) {
  std::vector<SignedEndpoint> out;
  int k = 0;
  for (const auto& iv : set.intervals()) {
    if (std::isfinite(iv.lo)) {
      ++k;
      out.push_back({iv.lo, k, k % 2 == 0 ? 1 : -1, +1});
    }
    if (std::isfinite(iv.hi)) {
      ++k;
      out.push_back({iv.hi, k, k % 2 == 0 ? 1 : -1, -1});
    }
  }
  return out;
}

std::string format_shortest(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_general(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::EvaluationError: return "evaluation-error";
    case ErrorKind::DivergentWeight: return "divergent-weight";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::InvalidStep: return "invalid-step";
    case ErrorKind::Stiffness: return "stiffness";
    case ErrorKind::UnknownIdentity: return "unknown-identity";
    case ErrorKind::SingularConfiguration: return "singular-configuration";
  }
  return "unknown";
}

}  // namespace todatw
