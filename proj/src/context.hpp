#pragma once

// Shared plumbing for the identity checks: quadrature pinned per
// configuration so that differenced evaluations share one truncation, and a
// residual accumulator.

#include <cmath>
#include <string>

#include <json.hpp>

#include "todatw/boundary.hpp"
#include "todatw/error.hpp"
#include "todatw/tau.hpp"
#include "todatw/tw_system.hpp"

namespace todatw::detail {

class Context {
 public:
  Context(int n, const IntervalSet& set, const VerifyOptions& options)
      : n_(n), set_(set), options_(options) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "identity checks need n >= 1");
    if (set.empty() || set.is_real_line() || set.finite_endpoints().empty()) {
      throw Error(ErrorKind::InvalidArgument, "identity checks need a finite endpoint");
    }
    nystrom_.points_per_panel = options.points_per_panel;
    nystrom_.truncation_L =
        options.truncation_L > 0.0 ? options.truncation_L : default_truncation(n, set) + 1.0;
    tau_.points_per_panel = options.points_per_panel;
    tau_.truncation_L =
        options.truncation_L > 0.0 ? options.truncation_L : default_truncation(n + 3, set) + 1.0;
  }

  int n() const noexcept { return n_; }
  const IntervalSet& set() const noexcept { return set_; }
  const NystromOptions& nystrom() const noexcept { return nystrom_; }
  const TauOptions& tau_options() const noexcept { return tau_; }
  const BoundarySteps& steps() const noexcept { return options_.steps; }
  const VerifyOptions& options() const noexcept { return options_; }

  /// tau_0 .. tau_{n+2} on j.
  TauTable tau(const IntervalSet& j) const { return TauTable::build(n_ + 1, j, {}, tau_); }
  TauTable tau_full() const { return tau(IntervalSet::real_line()); }
  TWState tw(const IntervalSet& j) const { return compute_tw_state(n_, j, nystrom_); }

  SetFunction log_tau() const {
    return [this](const IntervalSet& j) { return tau(j).log_tau(n_); };
  }
  SetFunction q_ratio() const {
    return [this](const IntervalSet& j) { return tau(j).Q(n_); };
  }
  SetFunction p_ratio() const {
    return [this](const IntervalSet& j) { return tau(j).P(n_); };
  }
  SetFunction q_tilde() const {
    return [this](const IntervalSet& j) { return tw(j).qtilde; };
  }
  SetFunction p_tilde() const {
    return [this](const IntervalSet& j) { return tw(j).ptilde; };
  }

  double b1(const SetFunction& f, int k = -1) const {
    return boundary_op(k, f, set_, options_.steps.first, options_.steps.levels);
  }
  double b2(const SetFunction& f, int k = -1) const {
    return boundary_op_squared(k, f, set_, options_.steps.second, options_.steps.second_levels);
  }

  nlohmann::json meta() const {
    return {{"points_per_panel", nystrom_.points_per_panel},
            {"truncation_L", nystrom_.truncation_L},
            {"tau_truncation_L", tau_.truncation_L},
            {"fd_steps",
             {{"first", options_.steps.first},
              {"second", options_.steps.second},
              {"mixed", options_.steps.mixed},
              {"fourth", options_.steps.fourth},
              {"levels", options_.steps.levels},
              {"second_levels", options_.steps.second_levels}}}};
  }

 private:
  int n_;
  IntervalSet set_;
  VerifyOptions options_;
  NystromOptions nystrom_;
  TauOptions tau_;
};

/// Asserted residuals feed the max-norm; reported ones are informational.
class Parts {
 public:
  void add(const std::string& name, double residual) {
    const double r = std::abs(residual);
    asserted_[name] = r;
    if (std::isnan(r) || std::isnan(max_)) {
      max_ = std::nan("");
    } else if (r > max_) {
      max_ = r;
    }
  }
  void note(const std::string& name, double value) { reported_[name] = value; }
  double max() const noexcept { return max_; }

  IdentityReport report(const std::string& id, const Context& ctx, double tol,
                        nlohmann::json extra = nlohmann::json::object()) const {
    IdentityReport r;
    r.identity = id;
    r.n = ctx.n();
    r.J = ctx.set().to_string();
    r.residual = max_;
    r.tol = tol;
    r.pass = max_ <= tol;
    r.meta = ctx.meta();
    r.meta["parts"] = asserted_;
    if (!reported_.empty()) r.meta["reported"] = reported_;
    for (auto& [key, value] : extra.items()) r.meta[key] = value;
    return r;
  }

 private:
  nlohmann::json asserted_ = nlohmann::json::object();
  nlohmann::json reported_ = nlohmann::json::object();
  double max_ = 0.0;
};

}  // namespace todatw::detail
