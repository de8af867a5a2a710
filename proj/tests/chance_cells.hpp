#pragma once

#include "icindex/baselines.hpp"
#include "icindex/metrics.hpp"
#include "icindex/splits.hpp"

namespace icindex::testing {

// Whether a baseline's score on a setting is 0.5 for every possible dataset.
// In a pool the learner sees only the sums of the sides present in training:
// a constant scores 0.5 on every concordance metric, a drug-only function on
// the drugwise C-index and the IC-index, a target-only one on the targetwise
// C-index and the IC-index, and any additive function on the IC-index.
inline bool chance_by_construction(BaselineKind learner, OtsSetting setting, MetricKind metric) {
  if (metric == MetricKind::Accuracy) return false;
  const bool drug_seen = setting == OtsSetting::IDIT || setting == OtsSetting::IDOT;
  const bool target_seen = setting == OtsSetting::IDIT || setting == OtsSetting::ODIT;
  bool uses_drug = false, uses_target = false, additive = true;
  switch (learner) {
    case BaselineKind::GS: break;
    case BaselineKind::DS: uses_drug = drug_seen; break;
    case BaselineKind::TS: uses_target = target_seen; break;
    case BaselineKind::SS:
      uses_drug = drug_seen;
      uses_target = target_seen;
      break;
    case BaselineKind::PS:
      uses_drug = uses_target = drug_seen && target_seen;
      additive = !uses_drug;
      break;
  }
  switch (metric) {
    case MetricKind::CIndex: return !uses_drug && !uses_target;
    case MetricKind::CIndexDrugwise: return !uses_target;
    case MetricKind::CIndexTargetwise: return !uses_drug;
    case MetricKind::ICIndex: return additive;
    case MetricKind::Accuracy: break;
  }
  return false;
}

}  // namespace icindex::testing
