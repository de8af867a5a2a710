#include "icindex/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icindex/errors.hpp"

namespace icindex {

namespace {

void check_inputs(std::span<const double> keys, std::span<const double> values, double tol) {
  if (keys.size() != values.size()) throw AlignmentError("keys and values differ in length");
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw InvalidValue("tie tolerance must be finite and >= 0");
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!std::isfinite(keys[i]) || !std::isfinite(values[i])) {
      throw InvalidValue("non-finite key or value at position " + std::to_string(i));
    }
  }
}

// 1-based Fenwick tree over uint32 counts stored in a caller-owned buffer.
struct Fenwick {
  std::span<std::uint32_t> tree;

  void add(std::size_t pos) noexcept {
    for (std::size_t i = pos + 1; i < tree.size(); i += i & (~i + 1)) ++tree[i];
  }
  /// Number of inserted ranks < pos.
  std::uint64_t prefix(std::size_t pos) const noexcept {
    std::uint64_t sum = 0;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) sum += tree[i];
    return sum;
  }
};

}  // namespace

ConcordanceCounts ConcordanceCounter::operator()(std::span<const double> keys,
                                                 std::span<const double> values,
                                                 double tie_tolerance) {
  check_inputs(keys, values, tie_tolerance);
  const std::size_t m = keys.size();
  ConcordanceCounts counts;
  if (m < 2) return counts;

  // Dense value ranks from a value-sorted pass; equal values share a rank.
  items_.resize(m);
  for (std::size_t i = 0; i < m; ++i) items_[i] = Item{values[i], keys[i], 0};
  std::sort(items_.begin(), items_.end(),
            [](const Item& a, const Item& b) { return a.value < b.value; });
  distinct_.clear();
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0 || items_[i].value != items_[i - 1].value) distinct_.push_back(items_[i].value);
    items_[i].rank = static_cast<std::uint32_t>(distinct_.size() - 1);
  }
  std::sort(items_.begin(), items_.end(),
            [](const Item& a, const Item& b) { return a.key < b.key; });

  tree_.assign(distinct_.size() + 1, 0u);
  equal_.assign(distinct_.size(), 0u);
  Fenwick fenwick{tree_};

  std::uint64_t inserted = 0;
  std::size_t group_begin = 0;
  while (group_begin < m) {
    std::size_t group_end = group_begin + 1;
    while (group_end < m && items_[group_end].key == items_[group_begin].key) ++group_end;

    if (inserted > 0) {
      for (std::size_t g = group_begin; g < group_end; ++g) {
        const Item& item = items_[g];
        std::uint64_t below, not_above;
        if (tie_tolerance == 0.0) {
          below = fenwick.prefix(item.rank);
          not_above = below + equal_[item.rank];
        } else {
          const auto lo =
              std::lower_bound(distinct_.begin(), distinct_.end(), item.value - tie_tolerance);
          const auto hi =
              std::upper_bound(distinct_.begin(), distinct_.end(), item.value + tie_tolerance);
          below = fenwick.prefix(static_cast<std::size_t>(lo - distinct_.begin()));
          not_above = fenwick.prefix(static_cast<std::size_t>(hi - distinct_.begin()));
        }
        counts.concordant += below;
        counts.discordant += inserted - not_above;
        counts.tied_value += not_above - below;
      }
    }
    for (std::size_t g = group_begin; g < group_end; ++g) {
      fenwick.add(items_[g].rank);
      ++equal_[items_[g].rank];
    }
    inserted += group_end - group_begin;
    group_begin = group_end;
  }
  return counts;
}

ConcordanceCounts count_concordance(std::span<const double> keys, std::span<const double> values,
                                    double tie_tolerance) {
  ConcordanceCounter counter;
  return counter(keys, values, tie_tolerance);
}

ConcordanceCounts count_concordance_naive(std::span<const double> keys,
                                          std::span<const double> values,
                                          double tie_tolerance) {
  check_inputs(keys, values, tie_tolerance);
  ConcordanceCounts counts;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = 0; j < keys.size(); ++j) {
      if (!(keys[i] > keys[j])) continue;
      if (values[j] < values[i] - tie_tolerance) {
        ++counts.concordant;
      } else if (values[j] > values[i] + tie_tolerance) {
        ++counts.discordant;
      } else {
        ++counts.tied_value;
      }
    }
  }
  return counts;
}

}  // namespace icindex
