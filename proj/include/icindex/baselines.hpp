#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icindex/dataset.hpp"

namespace icindex {

/// Permutation-equivariant reference learners built from label sums:
/// global sum, drugwise sum, targetwise sum, their sum and their product.
enum class BaselineKind { GS, DS, TS, SS, PS };

inline constexpr std::array<BaselineKind, 5> kAllBaselines = {
    BaselineKind::GS, BaselineKind::DS, BaselineKind::TS, BaselineKind::SS, BaselineKind::PS};

std::string_view to_string(BaselineKind kind) noexcept;
std::optional<BaselineKind> parse_baseline(std::string_view text) noexcept;

/// Combines the three sums the way `kind` prescribes. Unseen drugs and
/// targets contribute an empty sum, i.e. 0.
constexpr double combine_sums(BaselineKind kind, double grand, double drug, double target) noexcept {
  switch (kind) {
    case BaselineKind::GS: return grand;
    case BaselineKind::DS: return drug;
    case BaselineKind::TS: return target;
    case BaselineKind::SS: return drug + target;
    case BaselineKind::PS: return drug * target;
  }
  return 0.0;
}

struct TrainedBaseline {
  BaselineKind kind = BaselineKind::GS;
  double grand_sum = 0.0;
  std::map<std::string, double, std::less<>> drug_sums;
  std::map<std::string, double, std::less<>> target_sums;
};

TrainedBaseline fit_baseline(BaselineKind kind, const InteractionDataset& training);

double predict_baseline(const TrainedBaseline& model, std::string_view drug,
                        std::string_view target);

/// Predictions for every record of `queries`, in record order.
PredictionVector predict_baseline(const TrainedBaseline& model, const InteractionDataset& queries);

/// Same learner over dense integer ids; what the simulation uses.
struct DenseBaseline {
  BaselineKind kind = BaselineKind::GS;
  double grand_sum = 0.0;
  std::vector<double> drug_sums;    // indexed by drug id, sized n_drugs
  std::vector<double> target_sums;  // indexed by target id, sized n_targets

  double predict(std::uint32_t drug, std::uint32_t target) const noexcept {
    const double ds = drug < drug_sums.size() ? drug_sums[drug] : 0.0;
    const double ts = target < target_sums.size() ? target_sums[target] : 0.0;
    return combine_sums(kind, grand_sum, ds, ts);
  }
};

DenseBaseline fit_baseline_dense(BaselineKind kind, const TripletView& training);

}  // namespace icindex
