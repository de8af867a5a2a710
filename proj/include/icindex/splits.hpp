#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icindex/dataset.hpp"

namespace icindex {

/// Off-training-set learning settings: which side(s) of a test pair may be
/// absent from training.
enum class OtsSetting { IDIT, ODIT, IDOT, ODOT };

inline constexpr std::array<OtsSetting, 4> kAllSettings = {OtsSetting::IDIT, OtsSetting::ODIT,
                                                           OtsSetting::IDOT, OtsSetting::ODOT};

std::string_view to_string(OtsSetting setting) noexcept;
/// Case-insensitive: idit, odit, idot, odot.
std::optional<OtsSetting> parse_setting(std::string_view text) noexcept;
OtsClass required_class(OtsSetting setting) noexcept;

/// Group label per dense drug / target code of the dataset it was drawn for.
struct GroupAssignment {
  std::size_t k = 3;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> drug_group;
  std::vector<std::uint32_t> target_group;

  friend bool operator==(const GroupAssignment&, const GroupAssignment&) = default;
};

/// Shuffles drugs and targets with SplitMix64(seed) (drugs first) and deals
/// them round-robin into k groups, so group sizes differ by at most one.
/// Throws InsufficientEntities if either axis has fewer than k entities.
GroupAssignment assign_groups(const InteractionDataset& dataset, std::size_t k,
                              std::uint64_t seed);

struct Fold {
  std::size_t id = 0;
  std::uint32_t drug_group = 0;
  std::uint32_t target_group = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  /// Reserved; never generated.
  std::optional<std::vector<std::size_t>> validation;
  bool empty_test = false;

  friend bool operator==(const Fold&, const Fold&) = default;
};

struct FoldPlan {
  OtsSetting setting = OtsSetting::IDIT;
  GroupAssignment groups;
  std::vector<Fold> folds;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// One fold per (drug group, target group) block, row-major. Training sets:
///   IDIT: every record outside the test block;
///   ODIT: records whose drug group differs from the block's;
///   IDOT: records whose target group differs from the block's;
///   ODOT: records differing from the block in both groups.
/// The test set is the block itself, minus any record whose pair would not
/// fall into the setting's class against that training set (possible on
/// sparse data when an entity occurs only inside the block). Records in
/// neither set are ignored for that fold.
FoldPlan make_folds(const InteractionDataset& dataset, const GroupAssignment& groups,
                    OtsSetting setting);

struct FoldWitness {
  std::size_t record = 0;
  std::string drug;
  std::string target;
  OtsClass found = OtsClass::ITS;
};

struct FoldVerdict {
  bool passed = true;
  std::optional<FoldWitness> witness;  // first violating test record
};

/// Passes iff every test pair classifies as the setting's class against the
/// training subset, and train and test are disjoint.
FoldVerdict verify_fold(const InteractionDataset& dataset, std::span<const std::size_t> train,
                        std::span<const std::size_t> test, OtsSetting setting);

/// JSON document: setting, seed, k, group maps by identifier, then one entry
/// per fold with its id, block, train and test record positions.
void write_fold_plan(std::ostream& out, const FoldPlan& plan, const InteractionDataset& dataset);

}  // namespace icindex
