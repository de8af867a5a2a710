#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "icindex/counting.hpp"

namespace icindex {

struct SelftestOptions {
  std::size_t iterations = 300;
  std::uint32_t max_size = 8;  // upper bound on drugs and on targets
  std::uint64_t seed = 20240601;
};

/// Replaces the fast pair-counting kernel under test; lets a test build
/// prove the harness catches a broken kernel.
using CountingKernel =
    std::function<ConcordanceCounts(std::span<const double>, std::span<const double>)>;

struct SelftestFailure {
  std::string check;
  std::uint64_t instance_seed = 0;
  std::string detail;
};

struct SelftestReport {
  std::size_t checks = 0;
  std::vector<SelftestFailure> failures;
  bool passed() const noexcept { return failures.empty(); }
};

/// Runs the oracle-equivalence and invariance properties on random
/// instances. Instance i uses seed SplitMix64::substream(options.seed, i); a
/// failure line names that seed so random_instance(seed) reproduces it.
SelftestReport run_selftest(const SelftestOptions& options, std::ostream& log,
                            const CountingKernel& kernel = {});

}  // namespace icindex
