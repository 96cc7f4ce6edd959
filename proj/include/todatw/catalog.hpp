#pragma once

#include <string>
#include <vector>

#include "todatw/boundary.hpp"

namespace todatw {

/// Every checkable identity id, main text first, then the appendix chain.
const std::vector<std::string>& identity_catalog();
bool is_known_identity(const std::string& id);

struct Configuration {
  int n;
  IntervalSet set;
};

/// n in [n_lo, n_hi] crossed with (-1,1), (-1.5,0.25), (-2,-0.5)u(0.5,2),
/// (-inf,0.5).
std::vector<Configuration> standard_grid(int n_lo = 1, int n_hi = 4);
std::vector<IntervalSet> standard_sets();

/// Dispatches to the main-text or appendix verifier.
IdentityReport verify_identity(const std::string& id, int n, const IntervalSet& set,
                               const VerifyOptions& options = {});

/// Every (id, configuration) pair, evaluated on up to `threads` workers.
/// Output order is ids-major, then configurations, regardless of scheduling.
/// The first evaluation error is rethrown after all workers stop.
std::vector<IdentityReport> verify_batch(const std::vector<std::string>& ids,
                                         const std::vector<Configuration>& configs,
                                         const VerifyOptions& options = {}, int threads = 1);

}  // namespace todatw
