#include "todatw/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "todatw/error.hpp"
#include "todatw/hamiltonian.hpp"

namespace todatw {

const std::vector<std::string>& identity_catalog() {
  static const std::vector<std::string> ids{
      "E1",  "E2",  "E3", "E4", "E5", "E6",  "E7",  "E8",  "E9",  "E10", "E11", "E12",
      "E13", "E14", "A3", "A6", "A7", "A8",  "A9",  "A10", "A11", "A12", "A13", "A34"};
  return ids;
}

bool is_known_identity(const std::string& id) {
  const auto& ids = identity_catalog();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::vector<IntervalSet> standard_sets() {
  return {IntervalSet::parse("-1:1"), IntervalSet::parse("-1.5:0.25"),
          IntervalSet::parse("-2:-0.5,0.5:2"), IntervalSet::parse("-inf:0.5")};
}

std::vector<Configuration> standard_grid(int n_lo, int n_hi) {
  std::vector<Configuration> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    for (const auto& set : standard_sets()) out.push_back({n, set});
  }
  return out;
}

IdentityReport verify_identity(const std::string& id, int n, const IntervalSet& set,
                               const VerifyOptions& options) {
  if (!is_known_identity(id)) {
    throw Error(ErrorKind::UnknownIdentity, "unknown identity '" + id + "'");
  }
  if (id.front() == 'A') return verify_appendix_identity(id, n, set, options);
  return verify(id, n, set, options);
}

std::vector<IdentityReport> verify_batch(const std::vector<std::string>& ids,
                                         const std::vector<Configuration>& configs,
                                         const VerifyOptions& options, int threads) {
  for (const auto& id : ids) {
    if (!is_known_identity(id)) {
      throw Error(ErrorKind::UnknownIdentity, "unknown identity '" + id + "'");
    }
  }
  const std::size_t total = ids.size() * configs.size();
  std::vector<IdentityReport> out(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (std::size_t i; !failed && (i = next++) < total;) {
      const auto& id = ids[i / configs.size()];
      const auto& cfg = configs[i % configs.size()];
      try {
        out[i] = verify_identity(id, cfg.n, cfg.set, options);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const auto workers =
      static_cast<std::size_t>(std::clamp<long>(threads, 1, static_cast<long>(std::max<std::size_t>(total, 1))));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace todatw
