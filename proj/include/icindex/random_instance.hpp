#pragma once

#include <cstdint>
#include <vector>

#include "icindex/dataset.hpp"
#include "icindex/rng.hpp"

namespace icindex {

enum class ValueKind {
  Integer,     // small integers, many ties
  Dyadic,      // multiples of 1/8; every sum and difference is exact
  Continuous,  // uniform reals with copied values as the only ties
};

struct InstanceShape {
  std::uint32_t max_drugs = 8;
  std::uint32_t max_targets = 8;
  double min_density = 0.3;
  double max_density = 1.0;
};

/// Random sparse drug x target table with labels and predictions, for
/// property checks. Ties are injected on purpose: besides the ties that
/// integer values produce, some prediction and label columns are copies of
/// other columns, which creates exactly-zero interactions.
struct RandomInstance {
  std::uint32_t n_drugs = 0;
  std::uint32_t n_targets = 0;
  std::vector<std::uint32_t> drug;
  std::vector<std::uint32_t> target;
  std::vector<double> y;
  std::vector<double> pred;
  ValueKind label_kind = ValueKind::Integer;
  ValueKind pred_kind = ValueKind::Integer;

  TripletView view() const noexcept { return TripletView{drug, target, y, n_drugs, n_targets}; }
};

RandomInstance random_instance(std::uint64_t seed, const InstanceShape& shape = {});

}  // namespace icindex
