#include "icindex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <vector>

#include "icindex/errors.hpp"

namespace icindex {

std::string_view metric_name(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::Accuracy: return "accuracy";
    case MetricKind::CIndex: return "c_index";
    case MetricKind::CIndexDrugwise: return "c_index_drugwise";
    case MetricKind::CIndexTargetwise: return "c_index_targetwise";
    case MetricKind::ICIndex: return "ic_index";
  }
  return "?";
}

std::optional<MetricKind> parse_metric(std::string_view text) noexcept {
  if (text == "acc" || text == "accuracy") return MetricKind::Accuracy;
  if (text == "c" || text == "c_index") return MetricKind::CIndex;
  if (text == "cd" || text == "c_index_drugwise") return MetricKind::CIndexDrugwise;
  if (text == "ct" || text == "c_index_targetwise") return MetricKind::CIndexTargetwise;
  if (text == "ic" || text == "ic_index") return MetricKind::ICIndex;
  return std::nullopt;
}

namespace {

MetricReport from_twice_numerator(MetricKind kind, std::uint64_t twice_numerator,
                                  std::uint64_t denominator) {
  MetricReport r;
  r.metric = kind;
  if (denominator == 0) return r;
  r.numerator = static_cast<double>(twice_numerator) / 2.0;
  r.denominator = denominator;
  r.value = r.numerator / static_cast<double>(denominator);
  r.defaulted = false;
  return r;
}

void check_aligned(const TripletView& data, std::span<const double> pred) {
  if (pred.size() != data.size()) {
    throw AlignmentError("prediction count " + std::to_string(pred.size()) +
                         " does not match record count " + std::to_string(data.size()));
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!std::isfinite(pred[i])) {
      throw InvalidValue("non-finite prediction at position " + std::to_string(i));
    }
  }
}

// Records bucketed by one entity axis, each bucket sorted by the other axis.
struct Buckets {
  std::vector<std::size_t> offsets;   // size n_outer + 1
  std::vector<std::uint32_t> inner;   // other-axis id per entry
  std::vector<std::uint32_t> record;  // record position per entry

  std::size_t size(std::size_t b) const noexcept { return offsets[b + 1] - offsets[b]; }
};

Buckets bucket_by(std::span<const std::uint32_t> outer, std::span<const std::uint32_t> inner,
                  std::uint32_t n_outer) {
  Buckets b;
  b.offsets.assign(static_cast<std::size_t>(n_outer) + 1, 0);
  for (auto o : outer) ++b.offsets[o + 1];
  std::partial_sum(b.offsets.begin(), b.offsets.end(), b.offsets.begin());
  std::vector<std::size_t> cursor(b.offsets.begin(), b.offsets.end() - 1);
  b.inner.resize(outer.size());
  b.record.resize(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const std::size_t slot = cursor[outer[i]]++;
    b.inner[slot] = inner[i];
    b.record[slot] = static_cast<std::uint32_t>(i);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> tmp;
  for (std::uint32_t o = 0; o < n_outer; ++o) {
    const std::size_t lo = b.offsets[o], hi = b.offsets[o + 1];
    tmp.clear();
    for (std::size_t s = lo; s < hi; ++s) tmp.emplace_back(b.inner[s], b.record[s]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t s = lo; s < hi; ++s) {
      b.inner[s] = tmp[s - lo].first;
      b.record[s] = tmp[s - lo].second;
    }
  }
  return b;
}

std::uint32_t present_count(std::span<const std::uint32_t> ids, std::uint32_t n) {
  std::vector<bool> seen(n, false);
  std::uint32_t count = 0;
  for (auto id : ids) {
    if (!seen[id]) {
      seen[id] = true;
      ++count;
    }
  }
  return count;
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

MetricReport report_from_counts(MetricKind kind, const ConcordanceCounts& counts) {
  return from_twice_numerator(kind, 2 * counts.concordant + counts.tied_value, counts.total());
}

MetricReport accuracy(const TripletView& data, std::span<const double> pred) {
  check_aligned(data, pred);
  std::uint64_t twice = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    twice += static_cast<std::uint64_t>(2.0 * heaviside(data.y[i] * pred[i]));
  }
  return from_twice_numerator(MetricKind::Accuracy, twice, pred.size());
}

MetricReport c_index(const TripletView& data, std::span<const double> pred,
                     const MetricOptions& options) {
  check_aligned(data, pred);
  return report_from_counts(MetricKind::CIndex,
                            count_concordance(data.y, pred, options.tie_tolerance));
}

MetricReport groupwise_c_index(const TripletView& data, std::span<const double> pred, Axis axis,
                               const MetricOptions& options) {
  check_aligned(data, pred);
  const MetricKind kind =
      axis == Axis::Drug ? MetricKind::CIndexDrugwise : MetricKind::CIndexTargetwise;
  const auto& group_ids = axis == Axis::Drug ? data.drug : data.target;
  const auto& other_ids = axis == Axis::Drug ? data.target : data.drug;
  const std::uint32_t n_groups = axis == Axis::Drug ? data.n_drugs : data.n_targets;
  const Buckets buckets = bucket_by(group_ids, other_ids, n_groups);

  ConcordanceCounter counter;
  std::vector<double> keys, values;
  ConcordanceCounts pooled;
  double ratio_sum = 0.0;
  std::uint64_t contributing = 0;
  for (std::uint32_t g = 0; g < n_groups; ++g) {
    if (buckets.size(g) < 2) continue;
    keys.clear();
    values.clear();
    for (std::size_t s = buckets.offsets[g]; s < buckets.offsets[g + 1]; ++s) {
      keys.push_back(data.y[buckets.record[s]]);
      values.push_back(pred[buckets.record[s]]);
    }
    const ConcordanceCounts c = counter(keys, values, options.tie_tolerance);
    pooled += c;
    if (c.total() > 0) {
      ratio_sum += report_from_counts(kind, c).value;
      ++contributing;
    }
  }
  if (options.averaging == Averaging::Pooled) return report_from_counts(kind, pooled);

  MetricReport r;
  r.metric = kind;
  if (contributing == 0) return r;
  r.numerator = ratio_sum;
  r.denominator = contributing;
  r.value = ratio_sum / static_cast<double>(contributing);
  r.defaulted = false;
  return r;
}

Orientation choose_orientation(const TripletView& data) noexcept {
  const double nd = present_count(data.drug, data.n_drugs);
  const double nt = present_count(data.target, data.n_targets);
  if (nd == 0 || nt == 0) return Orientation::DrugPairs;
  const double density = static_cast<double>(data.size()) / (nd * nt);
  auto cost = [density](double outer, double inner) {
    const double overlap = std::max(2.0, density * density * inner);
    return outer * (outer - 1) / 2 * overlap * std::log2(overlap);
  };
  return cost(nd, nt) <= cost(nt, nd) ? Orientation::DrugPairs : Orientation::TargetPairs;
}

MetricReport ic_index(const TripletView& data, std::span<const double> pred,
                      const MetricOptions& options) {
  check_aligned(data, pred);
  Orientation orientation = options.orientation;
  if (orientation == Orientation::Auto) orientation = choose_orientation(data);
  const bool drug_outer = orientation == Orientation::DrugPairs;
  const auto& outer = drug_outer ? data.drug : data.target;
  const auto& inner = drug_outer ? data.target : data.drug;
  const std::uint32_t n_outer = drug_outer ? data.n_drugs : data.n_targets;
  const Buckets buckets = bucket_by(outer, inner, n_outer);

  // Rows with at least two entries; others cannot share two columns.
  std::vector<std::uint32_t> rows;
  for (std::uint32_t o = 0; o < n_outer; ++o) {
    if (buckets.size(o) >= 2) rows.push_back(o);
  }

  // For outer entities a < b and their shared inner entities c, the
  // interaction of the design on (c, c') is key_c - key_c' with
  // key_c = y(a,c) - y(b,c), and its predicted counterpart is
  // value_c - value_c'. Counting key-ordered pairs of shared columns
  // therefore visits every qualifying unordered quadruple exactly once.
  const std::uint32_t n_inner = drug_outer ? data.n_targets : data.n_drugs;
  auto work = [&](std::size_t first, std::size_t stride) {
    ConcordanceCounter counter;
    ConcordanceCounts counts;
    std::vector<double> keys, values;
    // Record of row a in each inner column, or -1.
    std::vector<std::int64_t> slot(n_inner, -1);
    for (std::size_t ia = first; ia < rows.size(); ia += stride) {
      const std::uint32_t a = rows[ia];
      const std::size_t a_lo = buckets.offsets[a], a_hi = buckets.offsets[a + 1];
      for (std::size_t s = a_lo; s < a_hi; ++s) slot[buckets.inner[s]] = buckets.record[s];
      for (std::size_t ib = ia + 1; ib < rows.size(); ++ib) {
        const std::uint32_t b = rows[ib];
        keys.clear();
        values.clear();
        for (std::size_t s = buckets.offsets[b]; s < buckets.offsets[b + 1]; ++s) {
          const std::int64_t ra = slot[buckets.inner[s]];
          if (ra < 0) continue;
          const std::uint32_t rb = buckets.record[s];
          keys.push_back(data.y[ra] - data.y[rb]);
          values.push_back(pred[ra] - pred[rb]);
        }
        if (keys.size() >= 2) counts += counter(keys, values, options.tie_tolerance);
      }
      for (std::size_t s = a_lo; s < a_hi; ++s) slot[buckets.inner[s]] = -1;
    }
    return counts;
  };

  const unsigned threads =
      std::min<std::size_t>(resolve_threads(options.threads), std::max<std::size_t>(rows.size(), 1));
  ConcordanceCounts total;
  if (threads <= 1) {
    total = work(0, 1);
  } else {
    std::vector<ConcordanceCounts> partial(threads);
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            partial[t] = work(t, threads);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const auto& p : partial) total += p;
  }
  return report_from_counts(MetricKind::ICIndex, total);
}

MetricReport evaluate(MetricKind kind, const TripletView& data, std::span<const double> pred,
                      const MetricOptions& options) {
  switch (kind) {
    case MetricKind::Accuracy: return accuracy(data, pred);
    case MetricKind::CIndex: return c_index(data, pred, options);
    case MetricKind::CIndexDrugwise: return groupwise_c_index(data, pred, Axis::Drug, options);
    case MetricKind::CIndexTargetwise: return groupwise_c_index(data, pred, Axis::Target, options);
    case MetricKind::ICIndex: return ic_index(data, pred, options);
  }
  return {};
}

MetricReport accuracy(const InteractionDataset& data, const PredictionVector& pred) {
  return accuracy(data.view(), pred.values);
}
MetricReport c_index(const InteractionDataset& data, const PredictionVector& pred,
                     const MetricOptions& options) {
  return c_index(data.view(), pred.values, options);
}
MetricReport groupwise_c_index(const InteractionDataset& data, const PredictionVector& pred,
                               Axis axis, const MetricOptions& options) {
  return groupwise_c_index(data.view(), pred.values, axis, options);
}
MetricReport ic_index(const InteractionDataset& data, const PredictionVector& pred,
                      const MetricOptions& options) {
  return ic_index(data.view(), pred.values, options);
}
MetricReport evaluate(MetricKind kind, const InteractionDataset& data,
                      const PredictionVector& pred, const MetricOptions& options) {
  return evaluate(kind, data.view(), pred.values, options);
}

// --- exhaustive references ---------------------------------------------------

namespace {

// Accumulates Heaviside utilities as an integer count of half units.
struct HalfTally {
  std::uint64_t twice = 0;
  std::uint64_t count = 0;
  void add(double a) {
    twice += static_cast<std::uint64_t>(2.0 * heaviside(a));
    ++count;
  }
};

}  // namespace

MetricReport c_index_bruteforce(const TripletView& data, std::span<const double> pred) {
  check_aligned(data, pred);
  HalfTally tally;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < pred.size(); ++j) {
      if (data.y[i] > data.y[j]) tally.add(pred[i] - pred[j]);
    }
  }
  return from_twice_numerator(MetricKind::CIndex, tally.twice, tally.count);
}

MetricReport groupwise_c_index_bruteforce(const TripletView& data, std::span<const double> pred,
                                          Axis axis, Averaging averaging) {
  check_aligned(data, pred);
  const MetricKind kind =
      axis == Axis::Drug ? MetricKind::CIndexDrugwise : MetricKind::CIndexTargetwise;
  const auto& group = axis == Axis::Drug ? data.drug : data.target;
  const std::uint32_t n_groups = axis == Axis::Drug ? data.n_drugs : data.n_targets;
  std::vector<HalfTally> per_group(n_groups);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < pred.size(); ++j) {
      if (group[i] == group[j] && data.y[i] > data.y[j]) per_group[group[i]].add(pred[i] - pred[j]);
    }
  }
  if (averaging == Averaging::Pooled) {
    HalfTally all;
    for (const auto& g : per_group) {
      all.twice += g.twice;
      all.count += g.count;
    }
    return from_twice_numerator(kind, all.twice, all.count);
  }
  MetricReport r;
  r.metric = kind;
  for (const auto& g : per_group) {
    if (g.count == 0) continue;
    r.numerator += static_cast<double>(g.twice) / (2.0 * static_cast<double>(g.count));
    ++r.denominator;
  }
  if (r.denominator > 0) {
    r.value = r.numerator / static_cast<double>(r.denominator);
    r.defaulted = false;
  }
  return r;
}

MetricReport ic_index_bruteforce(const TripletView& data, std::span<const double> pred,
                                 std::size_t cell_cap) {
  check_aligned(data, pred);
  const std::size_t nd = data.n_drugs, nt = data.n_targets;
  if (nd * nt > cell_cap) {
    throw SizeLimit("exhaustive IC-index limited to " + std::to_string(cell_cap) +
                    " drug-target cells, got " + std::to_string(nd * nt));
  }
  constexpr std::size_t kMissing = static_cast<std::size_t>(-1);
  std::vector<std::size_t> cell(nd * nt, kMissing);
  for (std::size_t i = 0; i < data.size(); ++i) cell[data.drug[i] * nt + data.target[i]] = i;

  HalfTally tally;
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t d2 = 0; d2 < nd; ++d2) {
      if (d2 == d) continue;
      for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t t2 = 0; t2 < nt; ++t2) {
          if (t2 == t) continue;
          // i = (d,t), i* = (d,t*), i' = (d',t), i'* = (d',t*)
          const std::size_t i = cell[d * nt + t], is = cell[d * nt + t2];
          const std::size_t ip = cell[d2 * nt + t], ips = cell[d2 * nt + t2];
          if (i == kMissing || is == kMissing || ip == kMissing || ips == kMissing) continue;
          if (!(data.y[i] + data.y[ips] > data.y[is] + data.y[ip])) continue;
          tally.add(pred[i] - pred[is] - pred[ip] + pred[ips]);
        }
      }
    }
  }
  return from_twice_numerator(MetricKind::ICIndex, tally.twice, tally.count);
}

MetricReport ic_index_bruteforce(const InteractionDataset& data, const PredictionVector& pred,
                                 std::size_t cell_cap) {
  return ic_index_bruteforce(data.view(), pred.values, cell_cap);
}

// --- 2x2 designs -------------------------------------------------------------

EffectDecomposition decompose_2x2(const Matrix2x2& m) noexcept {
  const double y = m[0][0], y_star = m[0][1], y_prime = m[1][0], y_prime_star = m[1][1];
  return EffectDecomposition{
      (y + y_prime + y_star + y_prime_star) / 4,
      (y - y_prime + y_star - y_prime_star) / 4,
      (y + y_prime - y_star - y_prime_star) / 4,
      (y - y_prime - y_star + y_prime_star) / 4,
  };
}

Matrix2x2 recompose_2x2(const EffectDecomposition& e) noexcept {
  const double c = e.grand_mean, d = e.drug_main, t = e.target_main, x = e.interaction;
  return Matrix2x2{{{c + d + t + x, c + d - t - x}, {c - d + t - x, c - d - t + x}}};
}

}  // namespace icindex
