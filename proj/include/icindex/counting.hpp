#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace icindex {

/// Pair tallies over index pairs (i, j) with key_i > key_j. Pairs with equal
/// keys are not counted at all.
struct ConcordanceCounts {
  std::uint64_t concordant = 0;  // value_i > value_j
  std::uint64_t discordant = 0;  // value_i < value_j
  std::uint64_t tied_value = 0;  // value_i == value_j (within tolerance)

  std::uint64_t total() const noexcept { return concordant + discordant + tied_value; }

  ConcordanceCounts& operator+=(const ConcordanceCounts& o) noexcept {
    concordant += o.concordant;
    discordant += o.discordant;
    tied_value += o.tied_value;
    return *this;
  }
  friend ConcordanceCounts operator+(ConcordanceCounts a, const ConcordanceCounts& b) noexcept {
    return a += b;
  }
  friend bool operator==(const ConcordanceCounts&, const ConcordanceCounts&) = default;
};

/// O(m log m) pair counting: sort by key, then sweep key-equivalence classes
/// in ascending order against a Fenwick tree over dense value ranks. Each
/// class is queried in full before any member is inserted, which keeps
/// equal-key pairs out of the tallies.
///
/// For a pair with key_i > key_j the values tie when value_j lies in
/// [value_i - tie_tolerance, value_i + tie_tolerance]; the default 0 means
/// exact equality. Keys always compare exactly. Throws InvalidValue on non-finite input or a
/// negative tolerance, AlignmentError when the lengths differ.
ConcordanceCounts count_concordance(std::span<const double> keys, std::span<const double> values,
                                    double tie_tolerance = 0.0);

/// Exhaustive O(m^2) reference with the same contract.
ConcordanceCounts count_concordance_naive(std::span<const double> keys,
                                          std::span<const double> values,
                                          double tie_tolerance = 0.0);

/// count_concordance with scratch buffers kept between calls. Hot loops that
/// count many short sequences (the IC-index runs one per drug pair) hold one
/// of these per thread. Not thread-safe.
class ConcordanceCounter {
 public:
  ConcordanceCounts operator()(std::span<const double> keys, std::span<const double> values,
                               double tie_tolerance = 0.0);

 private:
  struct Item {
    double value;
    double key;
    std::uint32_t rank;
  };
  std::vector<Item> items_;
  std::vector<double> distinct_;
  std::vector<std::uint32_t> tree_;
  std::vector<std::uint32_t> equal_;  // inserted count per rank
};

}  // namespace icindex
