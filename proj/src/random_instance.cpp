#include "icindex/random_instance.hpp"

#include <algorithm>

namespace icindex {

namespace {

double draw_value(ValueKind kind, SplitMix64& rng) {
  switch (kind) {
    case ValueKind::Integer: return static_cast<double>(static_cast<int>(rng.below(7)) - 3);
    case ValueKind::Dyadic: return static_cast<double>(static_cast<int>(rng.below(33)) - 16) / 8.0;
    case ValueKind::Continuous: return 2.0 * rng.uniform() - 1.0;
  }
  return 0.0;
}

// Overwrites column `to` with column `from` wherever both cells exist.
void copy_column(std::vector<double>& values, const std::vector<std::int64_t>& cell,
                 std::uint32_t n_drugs, std::uint32_t n_targets, std::uint32_t from,
                 std::uint32_t to) {
  for (std::uint32_t d = 0; d < n_drugs; ++d) {
    const auto src = cell[static_cast<std::size_t>(d) * n_targets + from];
    const auto dst = cell[static_cast<std::size_t>(d) * n_targets + to];
    if (src >= 0 && dst >= 0) values[static_cast<std::size_t>(dst)] = values[static_cast<std::size_t>(src)];
  }
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, const InstanceShape& shape) {
  SplitMix64 rng(seed);
  RandomInstance inst;
  inst.n_drugs = 1 + static_cast<std::uint32_t>(rng.below(shape.max_drugs));
  inst.n_targets = 1 + static_cast<std::uint32_t>(rng.below(shape.max_targets));
  const double density = shape.min_density + (shape.max_density - shape.min_density) * rng.uniform();
  inst.label_kind = static_cast<ValueKind>(rng.below(3));
  inst.pred_kind = static_cast<ValueKind>(rng.below(3));

  std::vector<std::int64_t> cell(static_cast<std::size_t>(inst.n_drugs) * inst.n_targets, -1);
  for (std::uint32_t d = 0; d < inst.n_drugs; ++d) {
    for (std::uint32_t t = 0; t < inst.n_targets; ++t) {
      if (rng.uniform() >= density) continue;
      cell[static_cast<std::size_t>(d) * inst.n_targets + t] = static_cast<std::int64_t>(inst.y.size());
      inst.drug.push_back(d);
      inst.target.push_back(t);
      inst.y.push_back(draw_value(inst.label_kind, rng));
      inst.pred.push_back(draw_value(inst.pred_kind, rng));
    }
  }
  if (inst.y.empty()) {
    inst.drug.push_back(0);
    inst.target.push_back(0);
    inst.y.push_back(draw_value(inst.label_kind, rng));
    inst.pred.push_back(draw_value(inst.pred_kind, rng));
    cell[0] = 0;
  }

  // Value ties between arbitrary records.
  const std::size_t n = inst.y.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.below(8) == 0) inst.pred[i] = inst.pred[rng.below(n)];
    if (rng.below(8) == 0) inst.y[i] = inst.y[rng.below(n)];
  }
  // Column copies: exact zero interactions for the 2x2 designs they span.
  if (inst.n_targets >= 2) {
    if (rng.below(3) == 0) {
      const auto from = static_cast<std::uint32_t>(rng.below(inst.n_targets));
      const auto to = static_cast<std::uint32_t>(rng.below(inst.n_targets));
      copy_column(inst.pred, cell, inst.n_drugs, inst.n_targets, from, to);
    }
    if (rng.below(4) == 0) {
      const auto from = static_cast<std::uint32_t>(rng.below(inst.n_targets));
      const auto to = static_cast<std::uint32_t>(rng.below(inst.n_targets));
      copy_column(inst.y, cell, inst.n_drugs, inst.n_targets, from, to);
    }
  }
  return inst;
}

}  // namespace icindex
