#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "icindex/counting.hpp"
#include "icindex/dataset.hpp"

namespace icindex {

enum class MetricKind { Accuracy, CIndex, CIndexDrugwise, CIndexTargetwise, ICIndex };

inline constexpr std::array<MetricKind, 5> kAllMetrics = {
    MetricKind::Accuracy, MetricKind::CIndex, MetricKind::CIndexDrugwise,
    MetricKind::CIndexTargetwise, MetricKind::ICIndex};

/// "accuracy", "c_index", "c_index_drugwise", "c_index_targetwise", "ic_index".
std::string_view metric_name(MetricKind kind) noexcept;
/// Short CLI aliases: acc, c, cd, ct, ic. Long names are accepted too.
std::optional<MetricKind> parse_metric(std::string_view text) noexcept;

/// An estimator value with the tallies it came from. value = numerator /
/// denominator when the denominator is positive, otherwise 0.5 with
/// `defaulted` set.
struct MetricReport {
  MetricKind metric = MetricKind::CIndex;
  double value = 0.5;
  double numerator = 0.0;
  std::uint64_t denominator = 0;
  bool defaulted = true;
};

/// 0 for a < 0, 1/2 for a == 0, 1 for a > 0.
constexpr double heaviside(double a) noexcept { return a > 0.0 ? 1.0 : (a < 0.0 ? 0.0 : 0.5); }

/// (C + T/2) / (C + D + T), assembled from the integer tally 2C + T with a
/// single final division.
MetricReport report_from_counts(MetricKind kind, const ConcordanceCounts& counts);

enum class Axis { Drug, Target };
enum class Averaging { Pooled, Macro };
/// Which entity pairs the IC-index iterates over; Auto picks the cheaper.
enum class Orientation { Auto, DrugPairs, TargetPairs };

struct MetricOptions {
  double tie_tolerance = 0.0;
  Averaging averaging = Averaging::Pooled;
  Orientation orientation = Orientation::Auto;
  /// Worker threads for the IC-index; 0 means hardware concurrency. The
  /// result does not depend on it.
  unsigned threads = 1;
};

// All TripletView overloads assume the view satisfies validate_triplets and
// throw AlignmentError when pred has a different length.

MetricReport accuracy(const TripletView& data, std::span<const double> pred);
MetricReport c_index(const TripletView& data, std::span<const double> pred,
                     const MetricOptions& options = {});
MetricReport groupwise_c_index(const TripletView& data, std::span<const double> pred, Axis axis,
                               const MetricOptions& options = {});
MetricReport ic_index(const TripletView& data, std::span<const double> pred,
                      const MetricOptions& options = {});

MetricReport evaluate(MetricKind kind, const TripletView& data, std::span<const double> pred,
                      const MetricOptions& options = {});

MetricReport accuracy(const InteractionDataset& data, const PredictionVector& pred);
MetricReport c_index(const InteractionDataset& data, const PredictionVector& pred,
                     const MetricOptions& options = {});
MetricReport groupwise_c_index(const InteractionDataset& data, const PredictionVector& pred,
                               Axis axis, const MetricOptions& options = {});
MetricReport ic_index(const InteractionDataset& data, const PredictionVector& pred,
                      const MetricOptions& options = {});
MetricReport evaluate(MetricKind kind, const InteractionDataset& data,
                      const PredictionVector& pred, const MetricOptions& options = {});

/// Orientation Auto resolves to for this data: compares
/// pairs(n_D) * m * log2(m) with m = density^2 * n_T against the transpose.
Orientation choose_orientation(const TripletView& data) noexcept;

// --- exhaustive references ---------------------------------------------------
//
// Literal pair/arrangement enumeration with Heaviside utilities. Used as
// oracles for the fast routines above; quadratic or quartic in the input.

MetricReport c_index_bruteforce(const TripletView& data, std::span<const double> pred);
MetricReport groupwise_c_index_bruteforce(const TripletView& data, std::span<const double> pred,
                                          Axis axis, Averaging averaging = Averaging::Pooled);

inline constexpr std::size_t kBruteforceCellCap = 4096;

/// Enumerates every ordered arrangement (i, i*, i', i'*) of four records on two
/// drugs x two targets with y_i + y_i'* > y_i* + y_i' and averages
/// H(f_i - f_i* - f_i' + f_i'*). Throws SizeLimit when n_D * n_T exceeds
/// `cell_cap`.
MetricReport ic_index_bruteforce(const TripletView& data, std::span<const double> pred,
                                 std::size_t cell_cap = kBruteforceCellCap);
MetricReport ic_index_bruteforce(const InteractionDataset& data, const PredictionVector& pred,
                                 std::size_t cell_cap = kBruteforceCellCap);

// --- 2x2 designs -------------------------------------------------------------

/// Rows are drugs (d, d'), columns targets (t, t*):
/// {{y(d,t), y(d,t*)}, {y(d',t), y(d',t*)}}.
using Matrix2x2 = std::array<std::array<double, 2>, 2>;

struct EffectDecomposition {
  double grand_mean = 0.0;
  double drug_main = 0.0;
  double target_main = 0.0;
  double interaction = 0.0;
};

EffectDecomposition decompose_2x2(const Matrix2x2& m) noexcept;
/// Inverse of decompose_2x2: each cell is the signed sum of the four effects.
Matrix2x2 recompose_2x2(const EffectDecomposition& e) noexcept;

}  // namespace icindex
