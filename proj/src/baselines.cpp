#include "icindex/baselines.hpp"

#include <algorithm>

namespace icindex {

std::string_view to_string(BaselineKind kind) noexcept {
  switch (kind) {
    case BaselineKind::GS: return "GS";
    case BaselineKind::DS: return "DS";
    case BaselineKind::TS: return "TS";
    case BaselineKind::SS: return "SS";
    case BaselineKind::PS: return "PS";
  }
  return "?";
}

std::optional<BaselineKind> parse_baseline(std::string_view text) noexcept {
  for (auto kind : kAllBaselines) {
    const auto name = to_string(kind);
    if (text.size() == name.size() &&
        std::equal(text.begin(), text.end(), name.begin(),
                   [](char a, char b) { return (a & ~0x20) == b; })) {
      return kind;
    }
  }
  return std::nullopt;
}

TrainedBaseline fit_baseline(BaselineKind kind, const InteractionDataset& training) {
  TrainedBaseline model;
  model.kind = kind;
  for (const auto& rec : training.records()) {
    model.grand_sum += rec.value;
    model.drug_sums[rec.drug] += rec.value;
    model.target_sums[rec.target] += rec.value;
  }
  return model;
}

double predict_baseline(const TrainedBaseline& model, std::string_view drug,
                        std::string_view target) {
  const auto d = model.drug_sums.find(drug);
  const auto t = model.target_sums.find(target);
  return combine_sums(model.kind, model.grand_sum, d == model.drug_sums.end() ? 0.0 : d->second,
                      t == model.target_sums.end() ? 0.0 : t->second);
}

PredictionVector predict_baseline(const TrainedBaseline& model, const InteractionDataset& queries) {
  PredictionVector out;
  out.values.reserve(queries.size());
  for (const auto& rec : queries.records()) {
    out.values.push_back(predict_baseline(model, rec.drug, rec.target));
  }
  return out;
}

DenseBaseline fit_baseline_dense(BaselineKind kind, const TripletView& training) {
  DenseBaseline model;
  model.kind = kind;
  model.drug_sums.assign(training.n_drugs, 0.0);
  model.target_sums.assign(training.n_targets, 0.0);
  for (std::size_t i = 0; i < training.size(); ++i) {
    model.grand_sum += training.y[i];
    model.drug_sums[training.drug[i]] += training.y[i];
    model.target_sums[training.target[i]] += training.y[i];
  }
  return model;
}

}  // namespace icindex
