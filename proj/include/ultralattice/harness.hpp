#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "ultralattice/lattice.hpp"

namespace ultralattice {

struct SuiteConfig {
  std::uint64_t seed = 1;
  RingConfig cfg = RingConfig::make(2, 1, 16, 1, -4);
  /// Instances per check unless overridden in `counts`.
  int instances = 20;
  std::map<std::string, int> counts;
  /// Random sample vectors per instance.
  int samples = 6;
  /// Depth for almost-element computations; k + 2 when unset.
  std::optional<int> depth;
  int max_rank = 2;
  /// Undecided verdicts tolerated before the suite fails.
  int undecided_threshold = 0;
  /// Run only these checks (all when empty).
  std::vector<std::string> only;
  /// Self-test: invert the outcome of this check.
  std::string negate;

  int count_for(const std::string& id) const;
  int effective_depth() const { return depth.value_or(cfg.k + 2); }
};

void to_json(nlohmann::json& j, const SuiteConfig& sc);
/// Missing fields keep their defaults.
SuiteConfig suite_config_from_json(const nlohmann::json& j);

struct CheckReport {
  std::string id;
  std::string statement;
  int passed = 0;
  int failed = 0;
  int undecided = 0;
  /// Instances outside the check's scope (e.g. oracle budget exhausted).
  int skipped = 0;
  /// Reproduction bundles for failures: cfg, seed, instance and inputs.
  std::vector<nlohmann::json> counterexamples;
  /// The same bundles for undecided instances.
  std::vector<nlohmann::json> undecided_examples;
  double seconds = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckReport> checks;

  int total_failed() const;
  int total_undecided() const;
  bool pass() const { return total_failed() == 0 && total_undecided() <= config.undecided_threshold; }
};

nlohmann::json report_json(const SuiteReport& r, bool with_times = true);
std::string report_table(const SuiteReport& r, bool with_times = true);

/// Identifiers of the registered checks, in execution order.
std::vector<std::string> check_ids();

/// Entries are sums of at most `support` monomials with exponents in
/// [0, min(3, N/4)). Requires rank, gen_count <= 4 and support <= 6.
Lattice gen_random_lattice(std::mt19937_64& rng, const RingConfig& cfg, int rank, int gen_count, int support);
/// Entries with at most `support` monomials, exponent ticks in [lo, hi).
Vector gen_random_vector(std::mt19937_64& rng, const RingConfig& cfg, int n, int support, std::int64_t lo, std::int64_t hi);

SuiteReport run_suite(const SuiteConfig& sc);

}  // namespace ultralattice
