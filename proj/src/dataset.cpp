#include "icindex/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "icindex/errors.hpp"

namespace icindex {

std::string_view to_string(OtsClass c) noexcept {
  switch (c) {
    case OtsClass::ITS: return "ITS";
    case OtsClass::IDIT: return "IDIT";
    case OtsClass::ODIT: return "ODIT";
    case OtsClass::IDOT: return "IDOT";
    case OtsClass::ODOT: return "ODOT";
  }
  return "?";
}

void validate_triplets(const TripletView& view) {
  const std::size_t n = view.y.size();
  if (view.drug.size() != n || view.target.size() != n) {
    throw AlignmentError("triplet arrays differ in length");
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (view.drug[i] >= view.n_drugs || view.target[i] >= view.n_targets) {
      throw AlignmentError("id out of range at position " + std::to_string(i));
    }
    if (!std::isfinite(view.y[i])) {
      throw InvalidValue("non-finite label at position " + std::to_string(i));
    }
    if (!seen.insert(pair_key(view.drug[i], view.target[i])).second) {
      throw DuplicatePair(std::to_string(view.drug[i]), std::to_string(view.target[i]));
    }
  }
}

namespace {

std::uint32_t intern(std::map<std::string, std::uint32_t, std::less<>>& index,
                     std::vector<std::string>& names, const std::string& name) {
  auto it = index.find(name);
  if (it != index.end()) return it->second;
  const auto code = static_cast<std::uint32_t>(names.size());
  index.emplace(name, code);
  names.push_back(name);
  return code;
}

}  // namespace

InteractionDataset InteractionDataset::from_records(std::vector<AffinityRecord> records,
                                                    DedupPolicy policy,
                                                    PredictionVector* predictions) {
  if (predictions != nullptr && predictions->size() != records.size()) {
    throw AlignmentError("prediction count " + std::to_string(predictions->size()) +
                         " does not match record count " + std::to_string(records.size()));
  }
  InteractionDataset ds;
  ds.records_.reserve(records.size());
  // Sums and multiplicities of merged duplicates, keyed by output position.
  std::unordered_map<std::size_t, std::size_t> multiplicity;
  std::vector<double> pred_out;

  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    if (rec.drug.empty() || rec.target.empty()) {
      throw SchemaError("empty drug or target identifier in record " + std::to_string(i));
    }
    if (!std::isfinite(rec.value)) {
      throw InvalidValue("non-finite affinity for (" + rec.drug + ", " + rec.target + ")");
    }
    const std::uint32_t d = intern(ds.drug_index_, ds.drug_names_, rec.drug);
    const std::uint32_t t = intern(ds.target_index_, ds.target_names_, rec.target);
    auto [it, inserted] = ds.pair_index_.try_emplace(pair_key(d, t), ds.records_.size());
    if (!inserted) {
      if (policy == DedupPolicy::Error) throw DuplicatePair(rec.drug, rec.target);
      const std::size_t pos = it->second;
      ++multiplicity[pos];
      ds.records_[pos].value += rec.value;
      if (predictions != nullptr) pred_out[pos] += predictions->values[i];
      continue;
    }
    ds.drug_codes_.push_back(d);
    ds.target_codes_.push_back(t);
    if (predictions != nullptr) pred_out.push_back(predictions->values[i]);
    ds.records_.push_back(std::move(rec));
  }
  for (const auto& [pos, extra] : multiplicity) {
    const double count = static_cast<double>(extra + 1);
    ds.records_[pos].value /= count;
    if (predictions != nullptr) pred_out[pos] /= count;
  }
  ds.labels_.reserve(ds.records_.size());
  for (const auto& rec : ds.records_) ds.labels_.push_back(rec.value);
  if (predictions != nullptr) predictions->values = std::move(pred_out);
  return ds;
}

InteractionDataset InteractionDataset::from_dense(std::span<const std::uint32_t> drug,
                                                  std::span<const std::uint32_t> target,
                                                  std::span<const double> y) {
  if (drug.size() != y.size() || target.size() != y.size()) {
    throw AlignmentError("triplet arrays differ in length");
  }
  std::vector<AffinityRecord> records;
  records.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    records.push_back({std::to_string(drug[i]), std::to_string(target[i]), y[i]});
  }
  return from_records(std::move(records));
}

std::optional<std::uint32_t> InteractionDataset::find_drug(std::string_view name) const {
  auto it = drug_index_.find(name);
  if (it == drug_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> InteractionDataset::find_target(std::string_view name) const {
  auto it = target_index_.find(name);
  if (it == target_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> InteractionDataset::find_pair(std::string_view drug,
                                                         std::string_view target) const {
  const auto d = find_drug(drug);
  const auto t = find_target(target);
  if (!d || !t) return std::nullopt;
  auto it = pair_index_.find(pair_key(*d, *t));
  if (it == pair_index_.end()) return std::nullopt;
  return it->second;
}

TripletView InteractionDataset::view() const noexcept {
  return TripletView{drug_codes_, target_codes_, labels_, n_drugs(), n_targets()};
}

InteractionDataset InteractionDataset::subset(std::span<const std::size_t> positions) const {
  std::vector<AffinityRecord> picked;
  picked.reserve(positions.size());
  for (std::size_t p : positions) picked.push_back(records_.at(p));
  return from_records(std::move(picked));
}

DatasetStats dataset_stats(const InteractionDataset& dataset) {
  DatasetStats s;
  s.n = dataset.size();
  s.n_drugs = dataset.n_drugs();
  s.n_targets = dataset.n_targets();
  if (s.n > 0) {
    s.density = static_cast<double>(s.n) /
                (static_cast<double>(s.n_drugs) * static_cast<double>(s.n_targets));
  }
  return s;
}

OtsClass classify_pair(std::string_view drug, std::string_view target,
                       const InteractionDataset& training) {
  const bool drug_seen = training.find_drug(drug).has_value();
  const bool target_seen = training.find_target(target).has_value();
  if (drug_seen && target_seen) {
    return training.find_pair(drug, target) ? OtsClass::ITS : OtsClass::IDIT;
  }
  if (drug_seen) return OtsClass::IDOT;
  if (target_seen) return OtsClass::ODIT;
  return OtsClass::ODOT;
}

TrainingIndex::TrainingIndex(const InteractionDataset& dataset,
                             std::span<const std::size_t> training)
    : drug_seen_(dataset.n_drugs(), false), target_seen_(dataset.n_targets(), false) {
  const auto drugs = dataset.drug_codes();
  const auto targets = dataset.target_codes();
  pairs_.reserve(training.size());
  for (std::size_t p : training) {
    drug_seen_[drugs[p]] = true;
    target_seen_[targets[p]] = true;
    pairs_.insert(pair_key(drugs[p], targets[p]));
  }
}

OtsClass TrainingIndex::classify(std::uint32_t drug, std::uint32_t target) const {
  const bool d = drug < drug_seen_.size() && drug_seen_[drug];
  const bool t = target < target_seen_.size() && target_seen_[target];
  if (d && t) return pairs_.contains(pair_key(drug, target)) ? OtsClass::ITS : OtsClass::IDIT;
  if (d) return OtsClass::IDOT;
  if (t) return OtsClass::ODIT;
  return OtsClass::ODOT;
}

// --- table I/O -------------------------------------------------------------

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::size_t line, std::string_view column) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "cannot parse " + std::string(column) + " value '" +
                               std::string(text) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "non-finite " + std::string(column) + " value");
  }
  return value;
}

}  // namespace

ParsedTable parse_table(std::istream& in, const ParseOptions& options) {
  const char sep = options.format == TableFormat::Tsv ? '\t' : ',';
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw SchemaError("empty input: missing header row");
  int col_drug = -1, col_target = -1, col_y = -1, col_pred = -1;
  const auto header = split_fields(line, sep);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = trim(header[i]);
    const int idx = static_cast<int>(i);
    if (name == "drug") col_drug = idx;
    else if (name == "target") col_target = idx;
    else if (name == "y") col_y = idx;
    else if (name == "pred") col_pred = idx;
  }
  if (col_drug < 0 || col_target < 0 || col_y < 0) {
    throw SchemaError("header must contain columns drug, target, y");
  }
  if (options.require_prediction && col_pred < 0) {
    throw SchemaError("header lacks the pred column");
  }
  const std::size_t needed =
      static_cast<std::size_t>(std::max({col_drug, col_target, col_y, col_pred})) + 1;

  std::vector<AffinityRecord> records;
  PredictionVector preds;
  while (next_line()) {
    const auto fields = split_fields(line, sep);
    if (fields.size() < needed) {
      throw ParseError(line_no, "expected at least " + std::to_string(needed) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    AffinityRecord rec{std::string(trim(fields[col_drug])), std::string(trim(fields[col_target])),
                       parse_real(fields[col_y], line_no, "y")};
    if (rec.drug.empty() || rec.target.empty()) {
      throw ParseError(line_no, "empty drug or target identifier");
    }
    if (col_pred >= 0) preds.values.push_back(parse_real(fields[col_pred], line_no, "pred"));
    records.push_back(std::move(rec));
  }

  ParsedTable out;
  if (col_pred >= 0) {
    out.dataset = InteractionDataset::from_records(std::move(records), options.dedup, &preds);
    out.predictions = std::move(preds);
  } else {
    out.dataset = InteractionDataset::from_records(std::move(records), options.dedup);
  }
  return out;
}

PredictionVector parse_predictions(std::istream& in, const InteractionDataset& dataset,
                                   TableFormat format) {
  const char sep = format == TableFormat::Tsv ? '\t' : ',';
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw SchemaError("empty prediction input: missing header row");
  int col_drug = -1, col_target = -1, col_pred = -1;
  const auto header = split_fields(line, sep);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = trim(header[i]);
    if (name == "drug") col_drug = static_cast<int>(i);
    else if (name == "target") col_target = static_cast<int>(i);
    else if (name == "pred") col_pred = static_cast<int>(i);
  }
  if (col_drug < 0 || col_target < 0 || col_pred < 0) {
    throw SchemaError("prediction header must contain columns drug, target, pred");
  }
  const std::size_t needed = static_cast<std::size_t>(std::max({col_drug, col_target, col_pred})) + 1;

  PredictionVector out;
  out.values.assign(dataset.size(), 0.0);
  std::vector<bool> filled(dataset.size(), false);
  while (next_line()) {
    const auto fields = split_fields(line, sep);
    if (fields.size() < needed) {
      throw ParseError(line_no, "expected at least " + std::to_string(needed) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    const auto drug = trim(fields[col_drug]);
    const auto target = trim(fields[col_target]);
    const double value = parse_real(fields[col_pred], line_no, "pred");
    const auto pos = dataset.find_pair(drug, target);
    if (!pos) {
      throw AlignmentError("line " + std::to_string(line_no) + ": prediction for unobserved pair (" +
                           std::string(drug) + ", " + std::string(target) + ")");
    }
    if (filled[*pos]) throw DuplicatePair(std::string(drug), std::string(target));
    filled[*pos] = true;
    out.values[*pos] = value;
  }
  const auto missing = std::find(filled.begin(), filled.end(), false);
  if (missing != filled.end()) {
    const auto& rec = dataset.records()[static_cast<std::size_t>(missing - filled.begin())];
    throw AlignmentError("no prediction for pair (" + rec.drug + ", " + rec.target + ")");
  }
  return out;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_table(std::ostream& out, const InteractionDataset& dataset,
                 const PredictionVector* predictions, TableFormat format) {
  if (predictions != nullptr && predictions->size() != dataset.size()) {
    throw AlignmentError("prediction count does not match record count");
  }
  const char sep = format == TableFormat::Tsv ? '\t' : ',';
  out << "drug" << sep << "target" << sep << 'y';
  if (predictions != nullptr) out << sep << "pred";
  out << '\n';
  const auto& recs = dataset.records();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    out << recs[i].drug << sep << recs[i].target << sep << format_real(recs[i].value);
    if (predictions != nullptr) out << sep << format_real(predictions->values[i]);
    out << '\n';
  }
}

}  // namespace icindex
