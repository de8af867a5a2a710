#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace icindex {

/// One observed (drug, target, affinity) triplet.
struct AffinityRecord {
  std::string drug;
  std::string target;
  double value = 0.0;

  friend bool operator==(const AffinityRecord&, const AffinityRecord&) = default;
};

/// Predictions positionally aligned with a dataset's records.
struct PredictionVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const PredictionVector&, const PredictionVector&) = default;
};

/// Relation of a drug-target pair to a training set.
enum class OtsClass { ITS, IDIT, ODIT, IDOT, ODOT };

std::string_view to_string(OtsClass c) noexcept;

enum class DedupPolicy { Error, Mean };
enum class TableFormat { Csv, Tsv };

/// Non-owning columnar view of triplets with dense integer ids. The metric
/// kernels run on this; ids must be < n_drugs / n_targets and (drug, target)
/// pairs must be unique. Ids in range but absent from the data are allowed.
struct TripletView {
  std::span<const std::uint32_t> drug;
  std::span<const std::uint32_t> target;
  std::span<const double> y;
  std::uint32_t n_drugs = 0;
  std::uint32_t n_targets = 0;

  std::size_t size() const noexcept { return y.size(); }
};

/// Checks the TripletView invariants: equal lengths, ids in range, finite
/// labels, unique pairs. Throws AlignmentError, InvalidValue or DuplicatePair.
void validate_triplets(const TripletView& view);

inline std::uint64_t pair_key(std::uint32_t drug, std::uint32_t target) noexcept {
  return (static_cast<std::uint64_t>(drug) << 32) | target;
}

/// Immutable, deduplicated set of interaction records. Drugs and targets get
/// dense codes in order of first appearance.
class InteractionDataset {
 public:
  InteractionDataset() = default;

  /// Throws DuplicatePair (policy Error), InvalidValue or SchemaError for
  /// empty identifiers. Under DedupPolicy::Mean repeated pairs collapse into
  /// the first occurrence carrying the mean value; `predictions`, when given,
  /// is averaged the same way.
  static InteractionDataset from_records(std::vector<AffinityRecord> records,
                                         DedupPolicy policy = DedupPolicy::Error,
                                         PredictionVector* predictions = nullptr);

  /// Builds a dataset from pre-densified integer ids; names become the
  /// decimal rendering of each id. Codes follow first appearance, like
  /// from_records.
  static InteractionDataset from_dense(std::span<const std::uint32_t> drug,
                                       std::span<const std::uint32_t> target,
                                       std::span<const double> y);

  const std::vector<AffinityRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::uint32_t n_drugs() const noexcept { return static_cast<std::uint32_t>(drug_names_.size()); }
  std::uint32_t n_targets() const noexcept { return static_cast<std::uint32_t>(target_names_.size()); }

  std::span<const std::uint32_t> drug_codes() const noexcept { return drug_codes_; }
  std::span<const std::uint32_t> target_codes() const noexcept { return target_codes_; }
  std::span<const double> labels() const noexcept { return labels_; }

  const std::string& drug_name(std::uint32_t code) const { return drug_names_.at(code); }
  const std::string& target_name(std::uint32_t code) const { return target_names_.at(code); }
  const std::vector<std::string>& drug_names() const noexcept { return drug_names_; }
  const std::vector<std::string>& target_names() const noexcept { return target_names_; }

  std::optional<std::uint32_t> find_drug(std::string_view name) const;
  std::optional<std::uint32_t> find_target(std::string_view name) const;
  /// Record position of the pair, if observed.
  std::optional<std::size_t> find_pair(std::string_view drug, std::string_view target) const;

  TripletView view() const noexcept;

  /// New dataset holding the selected records in the given order. Codes are
  /// reassigned densely.
  InteractionDataset subset(std::span<const std::size_t> positions) const;

  friend bool operator==(const InteractionDataset& a, const InteractionDataset& b) {
    return a.records_ == b.records_;
  }

 private:
  std::vector<AffinityRecord> records_;
  std::vector<std::uint32_t> drug_codes_;
  std::vector<std::uint32_t> target_codes_;
  std::vector<double> labels_;
  std::vector<std::string> drug_names_;
  std::vector<std::string> target_names_;
  std::map<std::string, std::uint32_t, std::less<>> drug_index_;
  std::map<std::string, std::uint32_t, std::less<>> target_index_;
  std::unordered_map<std::uint64_t, std::size_t> pair_index_;
};

struct DatasetStats {
  std::size_t n = 0;
  std::uint32_t n_drugs = 0;
  std::uint32_t n_targets = 0;
  /// n / (n_drugs * n_targets); 0 for an empty dataset.
  double density = 0.0;
};

DatasetStats dataset_stats(const InteractionDataset& dataset);

OtsClass classify_pair(std::string_view drug, std::string_view target,
                       const InteractionDataset& training);

/// Seen drugs, targets and pairs of a training subset, in the dense code
/// space of a parent dataset. Cheap repeated classification for fold checks.
class TrainingIndex {
 public:
  TrainingIndex(const InteractionDataset& dataset, std::span<const std::size_t> training);
  OtsClass classify(std::uint32_t drug, std::uint32_t target) const;

 private:
  std::vector<bool> drug_seen_;
  std::vector<bool> target_seen_;
  std::unordered_set<std::uint64_t> pairs_;
};

struct ParseOptions {
  TableFormat format = TableFormat::Csv;
  DedupPolicy dedup = DedupPolicy::Error;
  /// Fail with SchemaError when the pred column is absent.
  bool require_prediction = false;
};

struct ParsedTable {
  InteractionDataset dataset;
  std::optional<PredictionVector> predictions;
};

/// Reads a header-led table with columns drug, target, y and optionally pred
/// (any order; other columns are ignored). LF and CRLF line endings, '.'
/// decimal separator; blank lines are skipped.
ParsedTable parse_table(std::istream& in, const ParseOptions& options = {});

/// Reads a drug,target,pred table and aligns it with `dataset` by pair.
/// Throws AlignmentError when a record has no prediction or a prediction
/// names an unknown pair, DuplicatePair when a pair repeats.
PredictionVector parse_predictions(std::istream& in, const InteractionDataset& dataset,
                                   TableFormat format = TableFormat::Csv);

/// Writes drug,target,y[,pred] rows that parse_table reads back unchanged.
/// Reals use the shortest representation that round-trips.
void write_table(std::ostream& out, const InteractionDataset& dataset,
                 const PredictionVector* predictions = nullptr,
                 TableFormat format = TableFormat::Csv);

/// Shortest round-trip decimal form of a double.
std::string format_real(double value);

}  // namespace icindex
