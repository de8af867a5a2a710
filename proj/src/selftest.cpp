#include "icindex/selftest.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

#include "icindex/metrics.hpp"
#include "icindex/random_instance.hpp"
#include "icindex/rng.hpp"

namespace icindex {

namespace {

std::string describe(const ConcordanceCounts& c) {
  std::ostringstream s;
  s << '(' << c.concordant << ',' << c.discordant << ',' << c.tied_value << ')';
  return s.str();
}

std::string describe(const MetricReport& r) {
  std::ostringstream s;
  s << metric_name(r.metric) << '=' << r.value << " [" << r.numerator << '/' << r.denominator
    << (r.defaulted ? ", defaulted]" : "]");
  return s.str();
}

bool same(const MetricReport& a, const MetricReport& b) {
  return a.value == b.value && a.numerator == b.numerator && a.denominator == b.denominator &&
         a.defaulted == b.defaulted;
}

class Checker {
 public:
  Checker(SelftestReport& report, std::ostream& log, std::uint64_t seed)
      : report_(report), log_(log), seed_(seed) {}

  void expect(bool ok, const char* check, const std::string& detail) {
    ++report_.checks;
    if (ok) return;
    report_.failures.push_back({check, seed_, detail});
    log_ << "FAIL " << check << " instance-seed=" << seed_ << ": " << detail << '\n';
  }

 private:
  SelftestReport& report_;
  std::ostream& log_;
  std::uint64_t seed_;
};

bool exact_arithmetic(ValueKind kind) { return kind != ValueKind::Continuous; }

}  // namespace

SelftestReport run_selftest(const SelftestOptions& options, std::ostream& log,
                            const CountingKernel& kernel) {
  SelftestReport report;
  const InstanceShape shape{std::max(1u, options.max_size), std::max(1u, options.max_size), 0.3, 1.0};

  for (std::size_t it = 0; it < options.iterations; ++it) {
    const std::uint64_t seed = SplitMix64::substream(options.seed, it);
    const RandomInstance inst = random_instance(seed, shape);
    const TripletView view = inst.view();
    const std::span<const double> pred = inst.pred;
    Checker check(report, log, seed);

    const ConcordanceCounts fast = kernel ? kernel(inst.y, pred) : count_concordance(inst.y, pred);
    const ConcordanceCounts naive = count_concordance_naive(inst.y, pred);
    check.expect(fast == naive, "kernel-vs-naive", describe(fast) + " != " + describe(naive));

    const MetricReport ic_brute = ic_index_bruteforce(view, pred);
    for (Orientation o : {Orientation::DrugPairs, Orientation::TargetPairs}) {
      MetricOptions opt;
      opt.orientation = o;
      const MetricReport ic = ic_index(view, pred, opt);
      // The reference counts both valid arrangements of every quadruple.
      const bool ok = ic.value == ic_brute.value && ic.defaulted == ic_brute.defaulted &&
                      2 * ic.denominator == ic_brute.denominator &&
                      2 * ic.numerator == ic_brute.numerator;
      check.expect(ok, "ic-vs-bruteforce", describe(ic) + " != " + describe(ic_brute));
    }

    const MetricReport c = c_index(view, pred);
    const MetricReport c_brute = c_index_bruteforce(view, pred);
    check.expect(same(c, c_brute), "c-vs-bruteforce", describe(c) + " != " + describe(c_brute));

    for (Axis axis : {Axis::Drug, Axis::Target}) {
      for (Averaging avg : {Averaging::Pooled, Averaging::Macro}) {
        MetricOptions opt;
        opt.averaging = avg;
        const MetricReport g = groupwise_c_index(view, pred, axis, opt);
        const MetricReport g_brute = groupwise_c_index_bruteforce(view, pred, axis, avg);
        check.expect(same(g, g_brute), "groupwise-vs-bruteforce",
                     describe(g) + " != " + describe(g_brute));
      }
    }

    // Negated predictions swap concordant and discordant pairs.
    std::vector<double> negated(pred.begin(), pred.end());
    for (double& v : negated) v = -v;
    for (MetricKind kind : {MetricKind::CIndex, MetricKind::CIndexDrugwise,
                            MetricKind::CIndexTargetwise, MetricKind::ICIndex}) {
      const MetricReport a = evaluate(kind, view, pred);
      const MetricReport b = evaluate(kind, view, negated);
      const bool ok = a.denominator == b.denominator && a.defaulted == b.defaulted &&
                      (a.defaulted || a.numerator + b.numerator == static_cast<double>(a.denominator));
      check.expect(ok, "flip-symmetry", describe(a) + " vs negated " + describe(b));
    }

    // Additively separable offsets leave the IC-index unchanged.
    if (exact_arithmetic(inst.pred_kind)) {
      SplitMix64 rng(seed ^ 0x5EEDull);
      std::vector<double> u(inst.n_drugs), v(inst.n_targets);
      for (double& x : u) x = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000);
      for (double& x : v) x = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000);
      const double c0 = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000);
      std::vector<double> shifted(pred.begin(), pred.end());
      for (std::size_t i = 0; i < shifted.size(); ++i) {
        shifted[i] += u[inst.drug[i]] + v[inst.target[i]] + c0;
      }
      const MetricReport a = ic_index(view, pred);
      const MetricReport b = ic_index(view, shifted);
      check.expect(same(a, b), "additive-invariance", describe(a) + " != " + describe(b));
    }

    // Renaming entities and reordering records changes nothing.
    {
      SplitMix64 rng(seed ^ 0xB1Eull);
      std::vector<std::uint32_t> drug_map(inst.n_drugs), target_map(inst.n_targets);
      std::iota(drug_map.begin(), drug_map.end(), 0u);
      std::iota(target_map.begin(), target_map.end(), 0u);
      rng.shuffle(std::span(drug_map));
      rng.shuffle(std::span(target_map));
      std::vector<std::size_t> order(inst.y.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.shuffle(std::span(order));
      std::vector<std::uint32_t> drugs, targets;
      std::vector<double> y, p;
      for (std::size_t i : order) {
        drugs.push_back(drug_map[inst.drug[i]]);
        targets.push_back(target_map[inst.target[i]]);
        y.push_back(inst.y[i]);
        p.push_back(inst.pred[i]);
      }
      const TripletView relabeled{drugs, targets, y, inst.n_drugs, inst.n_targets};
      for (MetricKind kind : kAllMetrics) {
        const MetricReport a = evaluate(kind, view, pred);
        const MetricReport b = evaluate(kind, relabeled, p);
        check.expect(same(a, b), "relabel-invariance", describe(a) + " != " + describe(b));
      }
    }
  }
  return report;
}

}  // namespace icindex
