#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "icindex/errors.hpp"
#include "icindex/metrics.hpp"
#include "icindex/random_instance.hpp"
#include "icindex/rng.hpp"

namespace icindex {
namespace {

// Dataset over a dense grid: cell (d, t) named ("d<d>", "t<t>").
struct Grid {
  InteractionDataset data;
  PredictionVector pred;
};

Grid grid(const std::vector<std::vector<double>>& y, const std::vector<std::vector<double>>& f) {
  std::vector<AffinityRecord> recs;
  Grid g;
  for (std::size_t d = 0; d < y.size(); ++d) {
    for (std::size_t t = 0; t < y[d].size(); ++t) {
      recs.push_back({"d" + std::to_string(d), "t" + std::to_string(t), y[d][t]});
      g.pred.values.push_back(f[d][t]);
    }
  }
  g.data = InteractionDataset::from_records(std::move(recs));
  return g;
}

Grid records(std::vector<AffinityRecord> recs, std::vector<double> pred) {
  return Grid{InteractionDataset::from_records(std::move(recs)), PredictionVector{std::move(pred)}};
}

TEST(Heaviside, Examples) {
  EXPECT_EQ(heaviside(-3), 0.0);
  EXPECT_EQ(heaviside(0), 0.5);
  EXPECT_EQ(heaviside(-0.0), 0.5);
  EXPECT_EQ(heaviside(2), 1.0);
}

TEST(Accuracy, Examples) {
  // H(1*0.5) + H(-1*-0.2) + H(1*0) = 1 + 1 + 0.5
  auto g = records({{"a", "x", 1}, {"b", "x", -1}, {"c", "x", 1}}, {0.5, -0.2, 0.0});
  const auto r = accuracy(g.data, g.pred);
  EXPECT_DOUBLE_EQ(r.value, 2.5 / 3.0);
  EXPECT_EQ(r.numerator, 2.5);
  EXPECT_EQ(r.denominator, 3u);

  auto wrong = records({{"a", "x", 1}}, {-1});
  EXPECT_EQ(accuracy(wrong.data, wrong.pred).value, 0.0);

  const auto empty = accuracy(InteractionDataset{}, PredictionVector{});
  EXPECT_EQ(empty.value, 0.5);
  EXPECT_TRUE(empty.defaulted);
  EXPECT_EQ(empty.denominator, 0u);
}

TEST(Metrics, MisalignedPredictionsThrow) {
  auto g = records({{"a", "x", 1}, {"b", "x", 2}}, {1, 2});
  const PredictionVector short_pred{{1.0}};
  for (MetricKind k : kAllMetrics) EXPECT_THROW(evaluate(k, g.data, short_pred), AlignmentError);
  const PredictionVector nan_pred{{1.0, NAN}};
  EXPECT_THROW(c_index(g.data, nan_pred), InvalidValue);
}

TEST(CIndex, Examples) {
  auto g = records({{"a", "x", 3}, {"b", "x", 1}, {"c", "x", 2}}, {2.5, 1.0, 1.0});
  const auto r = c_index(g.data, g.pred);
  EXPECT_DOUBLE_EQ(r.value, 2.5 / 3.0);
  EXPECT_EQ(r.denominator, 3u);

  auto same = records({{"a", "x", 1}, {"b", "x", 2}, {"c", "x", 3}}, {1, 2, 3});
  EXPECT_EQ(c_index(same.data, same.pred).value, 1.0);

  auto tied = records({{"a", "x", 1}, {"b", "x", 1}, {"c", "x", 1}}, {3, 1, 2});
  const auto t = c_index(tied.data, tied.pred);
  EXPECT_EQ(t.value, 0.5);
  EXPECT_TRUE(t.defaulted);
}

TEST(CIndex, BinaryLabelsGiveAuc) {
  // AUC by direct positive/negative comparison.
  auto g = records({{"a", "x", 1}, {"b", "x", 1}, {"c", "x", 0}, {"d", "x", 0}, {"e", "x", 0}},
                   {0.9, 0.3, 0.3, 0.1, 0.5});
  // positives 0.9, 0.3 vs negatives 0.3, 0.1, 0.5: 3 + (0.5 + 1 + 0) = 4.5 of 6
  EXPECT_DOUBLE_EQ(c_index(g.data, g.pred).value, 4.5 / 6.0);
}

TEST(GroupwiseCIndex, Examples) {
  auto g = records({{"d1", "t1", 1}, {"d1", "t2", 2}, {"d2", "t1", 1}, {"d2", "t2", 2}},
                   {2, 1, 1, 2});
  const auto pooled = groupwise_c_index(g.data, g.pred, Axis::Drug);
  EXPECT_EQ(pooled.value, 0.5);
  EXPECT_EQ(pooled.denominator, 2u);
  EXPECT_FALSE(pooled.defaulted);

  MetricOptions macro;
  macro.averaging = Averaging::Macro;
  const auto m = groupwise_c_index(g.data, g.pred, Axis::Drug, macro);
  EXPECT_EQ(m.value, 0.5);
  EXPECT_EQ(m.denominator, 2u);
  EXPECT_EQ(m.numerator, 1.0);

  auto singles = records({{"d1", "t1", 1}, {"d2", "t1", 2}, {"d3", "t2", 3}}, {1, 2, 3});
  const auto s = groupwise_c_index(singles.data, singles.pred, Axis::Drug);
  EXPECT_TRUE(s.defaulted);
  EXPECT_EQ(s.value, 0.5);
  // Along targets, t1 holds one ordered pair predicted correctly.
  EXPECT_EQ(groupwise_c_index(singles.data, singles.pred, Axis::Target).value, 1.0);
}

TEST(GroupwiseCIndex, MacroWeighsGroupsEqually) {
  // d1: three pairs all correct; d2: one pair wrong.
  auto g = records({{"d1", "a", 1}, {"d1", "b", 2}, {"d1", "c", 3}, {"d2", "a", 1}, {"d2", "b", 2}},
                   {1, 2, 3, 5, 4});
  EXPECT_DOUBLE_EQ(groupwise_c_index(g.data, g.pred, Axis::Drug).value, 0.75);
  MetricOptions macro;
  macro.averaging = Averaging::Macro;
  EXPECT_DOUBLE_EQ(groupwise_c_index(g.data, g.pred, Axis::Drug, macro).value, 0.5);
}

TEST(Decompose2x2, Examples) {
  const auto e = decompose_2x2({{{4, 2}, {1, 3}}});
  EXPECT_EQ(e.grand_mean, 2.5);
  EXPECT_EQ(e.drug_main, 0.5);
  EXPECT_EQ(e.target_main, 0.0);
  EXPECT_EQ(e.interaction, 1.0);

  const auto c = decompose_2x2({{{7.25, 7.25}, {7.25, 7.25}}});
  EXPECT_EQ(c.grand_mean, 7.25);
  EXPECT_EQ(c.drug_main, 0.0);
  EXPECT_EQ(c.target_main, 0.0);
  EXPECT_EQ(c.interaction, 0.0);

  const auto x = decompose_2x2({{{1, -1}, {-1, 1}}});
  EXPECT_EQ(x.grand_mean, 0.0);
  EXPECT_EQ(x.drug_main, 0.0);
  EXPECT_EQ(x.target_main, 0.0);
  EXPECT_EQ(x.interaction, 1.0);
}

TEST(Decompose2x2, RecompositionWithinFourUlps) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 10000; ++trial) {
    Matrix2x2 m;
    double scale = 0.0;
    for (auto& row : m) {
      for (double& v : row) {
        v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(7)) - 3);
        scale = std::max(scale, std::fabs(v));
      }
    }
    // Rounding error is measured against the largest cell since the effects mix all four.
    const double ulp = scale * std::numeric_limits<double>::epsilon();
    const auto back = recompose_2x2(decompose_2x2(m));
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) ASSERT_LE(std::fabs(back[r][c] - m[r][c]), 4 * ulp) << trial;
    }
  }
}

TEST(ICIndex, SingleQuadrupleExamples) {
  auto g = grid({{1, 0}, {0, 1}}, {{2, 1}, {0, 3}});
  const auto r = ic_index(g.data, g.pred);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.denominator, 1u);
  EXPECT_EQ(ic_index_bruteforce(g.data, g.pred).value, 1.0);

  auto additive = grid({{1, 0}, {0, 1}}, {{1, 2}, {3, 4}});
  const auto a = ic_index(additive.data, additive.pred);
  EXPECT_EQ(a.value, 0.5);
  EXPECT_FALSE(a.defaulted);
  EXPECT_EQ(a.denominator, 1u);
}

TEST(ICIndex, EmptyRestrictionDefaults) {
  auto one_target = grid({{1}, {2}, {3}}, {{3}, {2}, {1}});
  EXPECT_TRUE(ic_index(one_target.data, one_target.pred).defaulted);
  EXPECT_TRUE(ic_index_bruteforce(one_target.data, one_target.pred).defaulted);

  // y(d,t) = u_d + v_t never satisfies the strict inequality.
  auto separable = grid({{1, 3, 4}, {2, 4, 5}, {0, 2, 3}}, {{1, 9, 2}, {7, 3, 3}, {0, 1, 8}});
  const auto r = ic_index_bruteforce(separable.data, separable.pred);
  EXPECT_TRUE(r.defaulted);
  EXPECT_EQ(r.value, 0.5);
  EXPECT_TRUE(ic_index(separable.data, separable.pred).defaulted);
}

TEST(ICIndex, SparseDrugPairsNeedTwoSharedTargets) {
  // d0/d1 share t0 and t1; d2 shares only t0 with each.
  auto g = records({{"d0", "t0", 1}, {"d0", "t1", 0}, {"d1", "t0", 0}, {"d1", "t1", 1},
                    {"d2", "t0", 5}, {"d2", "t2", 0}},
                   {1, 0, 0, 1, 0, 9});
  const auto r = ic_index(g.data, g.pred);
  EXPECT_EQ(r.denominator, 1u);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(ic_index_bruteforce(g.data, g.pred).denominator, 2u);
}

TEST(ICIndex, BruteforceCap) {
  const auto inst = random_instance(1, {8, 8, 1.0, 1.0});
  EXPECT_THROW(ic_index_bruteforce(inst.view(), inst.pred, 4), SizeLimit);
}

TEST(ICIndex, MatchesBruteforceOnRandomIntegerGrids) {
  SplitMix64 rng(66);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> y(6, std::vector<double>(6)), f = y;
    for (auto* m : {&y, &f}) {
      for (auto& row : *m) {
        for (double& v : row) v = static_cast<double>(rng.below(5));
      }
    }
    auto g = grid(y, f);
    const auto fast = ic_index(g.data, g.pred);
    const auto brute = ic_index_bruteforce(g.data, g.pred);
    ASSERT_EQ(fast.value, brute.value) << trial;
    ASSERT_EQ(2 * fast.denominator, brute.denominator) << trial;
  }
}

TEST(ICIndex, OrientationAndThreadsDoNotChangeResult) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = random_instance(seed, {30, 12, 0.2, 1.0});
    const auto ref = ic_index(inst.view(), inst.pred);
    for (Orientation o : {Orientation::DrugPairs, Orientation::TargetPairs}) {
      for (unsigned threads : {1u, 3u, 8u}) {
        MetricOptions opt;
        opt.orientation = o;
        opt.threads = threads;
        const auto r = ic_index(inst.view(), inst.pred, opt);
        ASSERT_EQ(r.value, ref.value);
        ASSERT_EQ(r.denominator, ref.denominator);
      }
    }
  }
}

TEST(ICIndex, OrientationFollowsCheaperAxis) {
  const auto wide = random_instance(4, {3, 60, 1.0, 1.0});
  const auto tall = random_instance(4, {60, 3, 1.0, 1.0});
  if (wide.n_drugs < wide.n_targets) EXPECT_EQ(choose_orientation(wide.view()), Orientation::DrugPairs);
  if (tall.n_drugs > tall.n_targets) EXPECT_EQ(choose_orientation(tall.view()), Orientation::TargetPairs);
}

TEST(ICIndex, InvariantToAdditivelySeparableOffsets) {
  SplitMix64 rng(31);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto inst = random_instance(seed);
    for (double& p : inst.pred) p = static_cast<double>(static_cast<int>(rng.below(21)) - 10);
    std::vector<double> u(inst.n_drugs), v(inst.n_targets);
    for (double& x : u) x = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000);
    for (double& x : v) x = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000);
    const double c = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000);
    std::vector<double> shifted = inst.pred;
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += u[inst.drug[i]] + v[inst.target[i]] + c;
    const auto a = ic_index(inst.view(), inst.pred);
    const auto b = ic_index(inst.view(), shifted);
    ASSERT_EQ(a.value, b.value);
    ASSERT_EQ(a.numerator, b.numerator);
  }
}

// Predictor families of the invariance table, as functions of the cell.
using Predictor = std::function<double(std::uint32_t, std::uint32_t)>;

TEST(Invariances, TableGridExactHalves) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto inst = random_instance(seed, {10, 10, 0.4, 1.0});
    SplitMix64 rng(seed + 1000);
    std::vector<double> u(inst.n_drugs), v(inst.n_targets);
    // Multiples of 1/8 keep every sum exact, so the stored predictions are
    // additive as doubles and not merely up to rounding.
    for (double& x : u) x = static_cast<double>(rng.below(161)) / 8 - 10;
    for (double& x : v) x = static_cast<double>(rng.below(5));
    const double c = static_cast<double>(rng.below(8)) / 8 + 0.5;

    struct Family {
      const char* name;
      Predictor f;
      std::vector<MetricKind> half;
    };
    const std::vector<Family> families = {
        {"zero", [](auto, auto) { return 0.0; }, {kAllMetrics.begin(), kAllMetrics.end()}},
        {"constant", [c](auto, auto) { return c; },
         {MetricKind::CIndex, MetricKind::CIndexDrugwise, MetricKind::CIndexTargetwise, MetricKind::ICIndex}},
        // varies with the target only: equal within every target
        {"target only", [&v](auto, std::uint32_t t) { return v[t]; },
         {MetricKind::CIndexTargetwise, MetricKind::ICIndex}},
        // varies with the drug only: equal within every drug
        {"drug only", [&u](std::uint32_t d, auto) { return u[d]; },
         {MetricKind::CIndexDrugwise, MetricKind::ICIndex}},
        {"additively separable", [&u, &v](std::uint32_t d, std::uint32_t t) { return 8 * v[t] - 4 * u[d]; },
         {MetricKind::ICIndex}},
    };
    for (const auto& family : families) {
      for (std::size_t i = 0; i < inst.pred.size(); ++i) inst.pred[i] = family.f(inst.drug[i], inst.target[i]);
      for (MetricKind k : family.half) {
        EXPECT_EQ(evaluate(k, inst.view(), inst.pred).value, 0.5)
            << family.name << " / " << metric_name(k) << " seed " << seed;
      }
    }
  }
}

TEST(Invariances, FlipSymmetry) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = random_instance(seed);
    std::vector<double> negated = inst.pred;
    for (double& p : negated) p = -p;
    for (MetricKind k : {MetricKind::CIndex, MetricKind::CIndexDrugwise, MetricKind::CIndexTargetwise,
                         MetricKind::ICIndex}) {
      const auto a = evaluate(k, inst.view(), inst.pred);
      const auto b = evaluate(k, inst.view(), negated);
      EXPECT_DOUBLE_EQ(a.value, a.defaulted ? 0.5 : 1.0 - b.value);
      EXPECT_EQ(a.numerator + b.numerator, static_cast<double>(a.denominator));
    }
  }
}

TEST(Invariances, PositiveAffineAndMonotoneMaps) {
  SplitMix64 rng(8);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto inst = random_instance(seed);
    for (double& p : inst.pred) p = static_cast<double>(static_cast<int>(rng.below(41)) - 20);
    const double scale = static_cast<double>(1 + rng.below(7));
    const double shift = static_cast<double>(static_cast<int>(rng.below(101)) - 50);
    std::vector<double> affine = inst.pred, scaled = inst.pred, cubed = inst.pred;
    for (double& p : affine) p = scale * p + shift;
    for (double& p : scaled) p = scale * p;
    for (double& p : cubed) p = p * p * p;
    for (MetricKind k : kAllMetrics) {
      const auto base = evaluate(k, inst.view(), inst.pred).value;
      // A shift can flip signs, so accuracy is only checked under pure scaling.
      if (k != MetricKind::Accuracy) EXPECT_EQ(evaluate(k, inst.view(), affine).value, base);
      EXPECT_EQ(evaluate(k, inst.view(), scaled).value, base);
      // The cube preserves order and sign, not differences.
      if (k != MetricKind::ICIndex) EXPECT_EQ(evaluate(k, inst.view(), cubed).value, base);
    }
  }
}

TEST(Invariances, RelabelingAndReordering) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = random_instance(seed);
    std::vector<AffinityRecord> recs;
    for (std::size_t i = 0; i < inst.y.size(); ++i) {
      recs.push_back({"d" + std::to_string(inst.drug[i]), "t" + std::to_string(inst.target[i]), inst.y[i]});
    }
    const auto original = InteractionDataset::from_records(recs);
    const PredictionVector pred{inst.pred};

    SplitMix64 rng(seed);
    std::vector<std::size_t> order(recs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span(order));
    std::vector<AffinityRecord> renamed;
    PredictionVector renamed_pred;
    for (std::size_t i : order) {
      renamed.push_back({"X" + recs[i].drug + "!", recs[i].target + "_renamed", recs[i].value});
      renamed_pred.values.push_back(inst.pred[i]);
    }
    const auto permuted = InteractionDataset::from_records(renamed);
    for (MetricKind k : kAllMetrics) {
      const auto a = evaluate(k, original, pred);
      const auto b = evaluate(k, permuted, renamed_pred);
      EXPECT_EQ(a.value, b.value) << metric_name(k);
      EXPECT_EQ(a.denominator, b.denominator);
    }
  }
}

TEST(MetricReport, RangeAndRatio) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = random_instance(seed);
    for (MetricKind k : kAllMetrics) {
      const auto r = evaluate(k, inst.view(), inst.pred);
      ASSERT_GE(r.value, 0.0);
      ASSERT_LE(r.value, 1.0);
      if (r.denominator > 0) {
        ASSERT_FALSE(r.defaulted);
        ASSERT_EQ(r.value, r.numerator / static_cast<double>(r.denominator));
      } else {
        ASSERT_TRUE(r.defaulted);
        ASSERT_EQ(r.value, 0.5);
      }
    }
  }
}

TEST(MetricNames, ParseRoundTrip) {
  for (MetricKind k : kAllMetrics) EXPECT_EQ(parse_metric(metric_name(k)), k);
  EXPECT_EQ(parse_metric("cd"), MetricKind::CIndexDrugwise);
  EXPECT_FALSE(parse_metric("auc").has_value());
}

}  // namespace
}  // namespace icindex
