#include "icindex/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "icindex/rng.hpp"

namespace icindex {

void XorConfig::validate() const {
  if (n_drugs == 0 || n_targets == 0) throw std::invalid_argument("grid dimensions must be positive");
  if (drug_threshold > n_drugs) throw std::invalid_argument("drug threshold exceeds drug count");
  if (target_threshold > n_targets) {
    throw std::invalid_argument("target threshold exceeds target count");
  }
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw std::invalid_argument("noise rate not in [0,1]");
  if (!(known_fraction >= 0.0 && known_fraction <= 1.0)) {
    throw std::invalid_argument("known fraction not in [0,1]");
  }
}

int xor_label(const XorConfig& config, std::uint32_t drug, std::uint32_t target) noexcept {
  const bool late_drug = drug + 1 > config.drug_threshold;
  const bool early_target = target + 1 <= config.target_threshold;
  return (late_drug != early_target) ? 1 : -1;
}

XorData generate_xor(const XorConfig& config) {
  config.validate();
  SplitMix64 rng(config.seed);
  XorData data;
  data.n_drugs = config.n_drugs;
  data.n_targets = config.n_targets;
  const std::size_t cells = static_cast<std::size_t>(config.n_drugs) * config.n_targets;
  data.labels.resize(cells);
  for (std::uint32_t d = 0; d < config.n_drugs; ++d) {
    for (std::uint32_t t = 0; t < config.n_targets; ++t) {
      int y = xor_label(config, d, t);
      if (rng.uniform() < config.noise_rate) y = -y;
      data.labels[static_cast<std::size_t>(d) * config.n_targets + t] = static_cast<std::int8_t>(y);
    }
  }
  const auto known = static_cast<std::size_t>(
      std::llround(config.known_fraction * static_cast<double>(cells)));
  std::vector<std::uint32_t> order(cells);
  std::iota(order.begin(), order.end(), 0u);
  for (std::size_t i = 0; i < known; ++i) {
    std::swap(order[i], order[i + rng.below(cells - i)]);
  }
  data.known.assign(cells, 0);
  for (std::size_t i = 0; i < known; ++i) data.known[order[i]] = 1;
  return data;
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) return 0.5;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IntervalSummary summarize(std::span<const double> values) {
  IntervalSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.lo95 = percentile(values, 0.025);
  s.hi95 = percentile(values, 0.975);
  return s;
}

SimulationResult::SimulationResult(std::vector<BaselineKind> learners, std::size_t repetitions)
    : learners_(std::move(learners)),
      repetitions_(repetitions),
      values_(learners_.size() * kAllSettings.size() * kAllMetrics.size() * repetitions, 0.0) {}

std::size_t SimulationResult::offset(BaselineKind learner, OtsSetting setting,
                                     MetricKind metric) const {
  const auto it = std::find(learners_.begin(), learners_.end(), learner);
  if (it == learners_.end()) throw std::out_of_range("learner not part of this result");
  const auto l = static_cast<std::size_t>(it - learners_.begin());
  const auto s = static_cast<std::size_t>(setting);
  const auto m = static_cast<std::size_t>(metric);
  return ((l * kAllSettings.size() + s) * kAllMetrics.size() + m) * repetitions_;
}

std::span<const double> SimulationResult::values(BaselineKind learner, OtsSetting setting,
                                                 MetricKind metric) const {
  return std::span(values_).subspan(offset(learner, setting, metric), repetitions_);
}

std::span<double> SimulationResult::values(BaselineKind learner, OtsSetting setting,
                                           MetricKind metric) {
  return std::span(values_).subspan(offset(learner, setting, metric), repetitions_);
}

namespace {

struct Pool {
  std::vector<std::uint32_t> drug;
  std::vector<std::uint32_t> target;
  std::vector<double> y;

  void add(std::uint32_t d, std::uint32_t t, double label) {
    drug.push_back(d);
    target.push_back(t);
    y.push_back(label);
  }
  TripletView view(std::uint32_t n_drugs, std::uint32_t n_targets) const {
    return TripletView{drug, target, y, n_drugs, n_targets};
  }
};

std::vector<bool> random_half(std::uint32_t count, SplitMix64& rng) {
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(std::span(order));
  std::vector<bool> in_first(count, false);
  for (std::uint32_t i = 0; i < count / 2; ++i) in_first[order[i]] = true;
  return in_first;
}

void run_repetition(const XorConfig& config, std::size_t rep, SimulationResult& result) {
  XorConfig rep_config = config;
  rep_config.seed = SplitMix64::substream(config.seed, rep);
  const XorData data = generate_xor(rep_config);

  SplitMix64 split_rng(SplitMix64::substream(rep_config.seed, 0));
  const std::vector<bool> drug_a = random_half(data.n_drugs, split_rng);
  const std::vector<bool> target_a = random_half(data.n_targets, split_rng);

  Pool training;
  std::array<Pool, 4> pools;
  for (std::uint32_t d = 0; d < data.n_drugs; ++d) {
    for (std::uint32_t t = 0; t < data.n_targets; ++t) {
      const double y = data.label(d, t);
      OtsSetting setting;
      if (drug_a[d] && target_a[t]) {
        if (data.is_known(d, t)) {
          training.add(d, t, y);
          continue;
        }
        setting = OtsSetting::IDIT;
      } else if (target_a[t]) {
        setting = OtsSetting::ODIT;
      } else if (drug_a[d]) {
        setting = OtsSetting::IDOT;
      } else {
        setting = OtsSetting::ODOT;
      }
      pools[static_cast<std::size_t>(setting)].add(d, t, y);
    }
  }

  const TripletView train_view = training.view(data.n_drugs, data.n_targets);
  std::vector<double> pred;
  for (BaselineKind learner : result.learners()) {
    const DenseBaseline model = fit_baseline_dense(learner, train_view);
    for (OtsSetting setting : kAllSettings) {
      const Pool& pool = pools[static_cast<std::size_t>(setting)];
      const TripletView view = pool.view(data.n_drugs, data.n_targets);
      pred.resize(pool.y.size());
      for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = model.predict(pool.drug[i], pool.target[i]);
      for (MetricKind metric : kAllMetrics) {
        result.values(learner, setting, metric)[rep] = evaluate(metric, view, pred).value;
      }
    }
  }
}

}  // namespace

SimulationResult run_xor_experiment(const XorConfig& config, std::size_t repetitions,
                                    std::span<const BaselineKind> learners, unsigned threads) {
  config.validate();
  if (repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
  SimulationResult result(std::vector<BaselineKind>(learners.begin(), learners.end()), repetitions);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, repetitions));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (std::size_t rep = next++; rep < repetitions && !failed; rep = next++) {
        run_repetition(config, rep, result);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void write_summary_tsv(std::ostream& out, const SimulationResult& result) {
  out << "learner\tsetting\tmetric\tmean\tlo95\thi95\trepetitions\n";
  for (BaselineKind learner : result.learners()) {
    for (OtsSetting setting : kAllSettings) {
      for (MetricKind metric : kAllMetrics) {
        const IntervalSummary s = result.summary(learner, setting, metric);
        out << to_string(learner) << '\t' << to_string(setting) << '\t' << metric_name(metric)
            << '\t' << format_real(s.mean) << '\t' << format_real(s.lo95) << '\t'
            << format_real(s.hi95) << '\t' << result.repetitions() << '\n';
      }
    }
  }
}

void write_raw_tsv(std::ostream& out, const SimulationResult& result) {
  out << "learner\tsetting\tmetric\trepetition\tvalue\n";
  for (BaselineKind learner : result.learners()) {
    for (OtsSetting setting : kAllSettings) {
      for (MetricKind metric : kAllMetrics) {
        const auto values = result.values(learner, setting, metric);
        for (std::size_t r = 0; r < values.size(); ++r) {
          out << to_string(learner) << '\t' << to_string(setting) << '\t' << metric_name(metric)
              << '\t' << r << '\t' << format_real(values[r]) << '\n';
        }
      }
    }
  }
}

}  // namespace icindex
