#include "icindex/splits.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "icindex/errors.hpp"
#include "icindex/rng.hpp"

namespace icindex {

std::string_view to_string(OtsSetting setting) noexcept {
  switch (setting) {
    case OtsSetting::IDIT: return "IDIT";
    case OtsSetting::ODIT: return "ODIT";
    case OtsSetting::IDOT: return "IDOT";
    case OtsSetting::ODOT: return "ODOT";
  }
  return "?";
}

std::optional<OtsSetting> parse_setting(std::string_view text) noexcept {
  std::string upper(text);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (auto s : kAllSettings) {
    if (upper == to_string(s)) return s;
  }
  return std::nullopt;
}

OtsClass required_class(OtsSetting setting) noexcept {
  switch (setting) {
    case OtsSetting::IDIT: return OtsClass::IDIT;
    case OtsSetting::ODIT: return OtsClass::ODIT;
    case OtsSetting::IDOT: return OtsClass::IDOT;
    case OtsSetting::ODOT: return OtsClass::ODOT;
  }
  return OtsClass::ITS;
}

namespace {

std::vector<std::uint32_t> deal_groups(std::uint32_t count, std::size_t k, SplitMix64& rng) {
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(std::span(order));
  std::vector<std::uint32_t> group(count);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    group[order[pos]] = static_cast<std::uint32_t>(pos % k);
  }
  return group;
}

bool in_training(OtsSetting setting, std::uint32_t dg, std::uint32_t tg, std::uint32_t fold_dg,
                 std::uint32_t fold_tg) {
  switch (setting) {
    case OtsSetting::IDIT: return dg != fold_dg || tg != fold_tg;
    case OtsSetting::ODIT: return dg != fold_dg;
    case OtsSetting::IDOT: return tg != fold_tg;
    case OtsSetting::ODOT: return dg != fold_dg && tg != fold_tg;
  }
  return false;
}

}  // namespace

GroupAssignment assign_groups(const InteractionDataset& dataset, std::size_t k,
                              std::uint64_t seed) {
  if (k == 0) throw InsufficientEntities("group count must be positive");
  if (dataset.n_drugs() < k || dataset.n_targets() < k) {
    throw InsufficientEntities("need at least " + std::to_string(k) +
                               " drugs and targets, have " + std::to_string(dataset.n_drugs()) +
                               " drugs and " + std::to_string(dataset.n_targets()) + " targets");
  }
  SplitMix64 rng(seed);
  GroupAssignment g;
  g.k = k;
  g.seed = seed;
  g.drug_group = deal_groups(dataset.n_drugs(), k, rng);
  g.target_group = deal_groups(dataset.n_targets(), k, rng);
  return g;
}

FoldPlan make_folds(const InteractionDataset& dataset, const GroupAssignment& groups,
                    OtsSetting setting) {
  if (groups.drug_group.size() != dataset.n_drugs() ||
      groups.target_group.size() != dataset.n_targets()) {
    throw AlignmentError("group assignment was drawn for a different dataset");
  }
  const auto drugs = dataset.drug_codes();
  const auto targets = dataset.target_codes();
  const OtsClass wanted = required_class(setting);

  FoldPlan plan;
  plan.setting = setting;
  plan.groups = groups;
  for (std::uint32_t i = 0; i < groups.k; ++i) {
    for (std::uint32_t j = 0; j < groups.k; ++j) {
      Fold fold;
      fold.id = plan.folds.size();
      fold.drug_group = i;
      fold.target_group = j;
      std::vector<std::size_t> block;
      for (std::size_t r = 0; r < dataset.size(); ++r) {
        const std::uint32_t dg = groups.drug_group[drugs[r]];
        const std::uint32_t tg = groups.target_group[targets[r]];
        if (dg == i && tg == j) {
          block.push_back(r);
        } else if (in_training(setting, dg, tg, i, j)) {
          fold.train.push_back(r);
        }
      }
      const TrainingIndex index(dataset, fold.train);
      for (std::size_t r : block) {
        if (index.classify(drugs[r], targets[r]) == wanted) fold.test.push_back(r);
      }
      fold.empty_test = fold.test.empty();
      plan.folds.push_back(std::move(fold));
    }
  }
  return plan;
}

FoldVerdict verify_fold(const InteractionDataset& dataset, std::span<const std::size_t> train,
                        std::span<const std::size_t> test, OtsSetting setting) {
  const TrainingIndex index(dataset, train);
  const std::unordered_set<std::size_t> train_set(train.begin(), train.end());
  const OtsClass wanted = required_class(setting);
  const auto drugs = dataset.drug_codes();
  const auto targets = dataset.target_codes();
  for (std::size_t r : test) {
    const OtsClass found =
        train_set.contains(r) ? OtsClass::ITS : index.classify(drugs[r], targets[r]);
    if (found != wanted) {
      const auto& rec = dataset.records().at(r);
      return FoldVerdict{false, FoldWitness{r, rec.drug, rec.target, found}};
    }
  }
  return {};
}

void write_fold_plan(std::ostream& out, const FoldPlan& plan, const InteractionDataset& dataset) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["setting"] = to_string(plan.setting);
  doc["seed"] = plan.groups.seed;
  doc["k"] = plan.groups.k;
  ordered_json drug_groups = ordered_json::object();
  for (std::uint32_t d = 0; d < dataset.n_drugs(); ++d) {
    drug_groups[dataset.drug_name(d)] = plan.groups.drug_group[d];
  }
  ordered_json target_groups = ordered_json::object();
  for (std::uint32_t t = 0; t < dataset.n_targets(); ++t) {
    target_groups[dataset.target_name(t)] = plan.groups.target_group[t];
  }
  doc["drug_groups"] = std::move(drug_groups);
  doc["target_groups"] = std::move(target_groups);

  // Header fields one per line, then each fold compact on its own line.
  out << "{\n";
  for (const auto& item : doc.items()) {
    out << ' ' << ordered_json(item.key()).dump() << ": " << item.value().dump() << ",\n";
  }
  out << " \"folds\": [";
  for (std::size_t i = 0; i < plan.folds.size(); ++i) {
    const Fold& f = plan.folds[i];
    ordered_json entry;
    entry["setting"] = to_string(plan.setting);
    entry["fold"] = f.id;
    entry["drug_group"] = f.drug_group;
    entry["target_group"] = f.target_group;
    entry["seed"] = plan.groups.seed;
    entry["empty_test"] = f.empty_test;
    entry["train"] = f.train;
    entry["test"] = f.test;
    if (f.validation) entry["validation"] = *f.validation;
    out << (i == 0 ? "\n  " : ",\n  ") << entry.dump();
  }
  out << "\n ]\n}\n";
}

}  // namespace icindex
