#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "icindex/baselines.hpp"
#include "icindex/metrics.hpp"
#include "icindex/splits.hpp"

namespace icindex {

/// Imbalanced-XOR interaction data on an n_drugs x n_targets grid.
struct XorConfig {
  std::uint32_t n_drugs = 200;
  std::uint32_t n_targets = 200;
  std::uint32_t drug_threshold = 20;
  std::uint32_t target_threshold = 40;
  double noise_rate = 0.05;
  double known_fraction = 0.25;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct XorData {
  std::uint32_t n_drugs = 0;
  std::uint32_t n_targets = 0;
  std::vector<std::int8_t> labels;  // row-major, drug-major, values in {-1, +1}
  std::vector<std::uint8_t> known;  // 1 where the cell was sampled as known

  double label(std::uint32_t drug, std::uint32_t target) const noexcept {
    return labels[static_cast<std::size_t>(drug) * n_targets + target];
  }
  bool is_known(std::uint32_t drug, std::uint32_t target) const noexcept {
    return known[static_cast<std::size_t>(drug) * n_targets + target] != 0;
  }
};

/// Noise-free label of 0-based cell (drug, target):
/// 2 * [(drug + 1 > drug_threshold) XOR (target + 1 <= target_threshold)] - 1.
int xor_label(const XorConfig& config, std::uint32_t drug, std::uint32_t target) noexcept;

/// Draws from SplitMix64(config.seed): one uniform per cell in row-major
/// order flips its label when below noise_rate, then a uniformly random
/// subset of exactly round(known_fraction * cells) cells is marked known.
XorData generate_xor(const XorConfig& config);

struct IntervalSummary {
  double mean = 0.0;
  double lo95 = 0.0;  // empirical 2.5th percentile
  double hi95 = 0.0;  // empirical 97.5th percentile
};

/// Linear-interpolation percentile (the "type 7" rule) of unsorted data.
double percentile(std::span<const double> values, double q);
IntervalSummary summarize(std::span<const double> values);

/// Per-repetition metric values for every (learner, setting, metric).
class SimulationResult {
 public:
  SimulationResult() = default;
  SimulationResult(std::vector<BaselineKind> learners, std::size_t repetitions);

  const std::vector<BaselineKind>& learners() const noexcept { return learners_; }
  std::size_t repetitions() const noexcept { return repetitions_; }

  std::span<const double> values(BaselineKind learner, OtsSetting setting, MetricKind metric) const;
  std::span<double> values(BaselineKind learner, OtsSetting setting, MetricKind metric);
  IntervalSummary summary(BaselineKind learner, OtsSetting setting, MetricKind metric) const {
    return summarize(values(learner, setting, metric));
  }

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;

 private:
  std::size_t offset(BaselineKind learner, OtsSetting setting, MetricKind metric) const;

  std::vector<BaselineKind> learners_;
  std::size_t repetitions_ = 0;
  std::vector<double> values_;
};

/// Repetition r draws fresh data with seed SplitMix64::substream(config.seed, r),
/// splits drugs and targets into random halves A/B, trains every learner on
/// the known cells of block (A,A) and scores it against the full (noisy)
/// ground truth of four pools: IDIT = unknown cells of (A,A), ODIT = (B,A),
/// IDOT = (A,B), ODOT = (B,B). Repetitions run on `threads` workers
/// (0 = hardware concurrency); the result does not depend on the count.
SimulationResult run_xor_experiment(const XorConfig& config, std::size_t repetitions,
                                    std::span<const BaselineKind> learners, unsigned threads = 1);

/// Columns: learner, setting, metric, mean, lo95, hi95, repetitions.
void write_summary_tsv(std::ostream& out, const SimulationResult& result);
/// Columns: learner, setting, metric, repetition, value.
void write_raw_tsv(std::ostream& out, const SimulationResult& result);

}  // namespace icindex
