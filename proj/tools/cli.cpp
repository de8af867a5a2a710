#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "icindex/baselines.hpp"
#include "icindex/dataset.hpp"
#include "icindex/errors.hpp"
#include "icindex/metrics.hpp"
#include "icindex/selftest.hpp"
#include "icindex/simulation.hpp"
#include "icindex/splits.hpp"

namespace icindex::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

TableFormat table_format(const std::string& path, const std::string& requested) {
  if (requested == "csv") return TableFormat::Csv;
  if (requested == "tsv") return TableFormat::Tsv;
  const bool tsv = path.size() >= 4 && (path.ends_with(".tsv") || path.ends_with(".tab"));
  return tsv ? TableFormat::Tsv : TableFormat::Csv;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open input file '" + path + "'");
  return in;
}

// Writes to --out when given, else to the command's standard output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string header(const std::string& text, bool color) {
  return color ? "\x1b[1m" + text + "\x1b[0m" : text;
}

// --- metrics -----------------------------------------------------------------

struct MetricsArgs {
  std::string input;
  std::string pred_file;
  std::string input_format = "auto";
  std::string metrics = "acc,c,cd,ct,ic";
  std::string averaging = "pooled";
  std::string orientation = "auto";
  std::string dedup = "error";
  std::string format = "table";
  std::string out;
  double tie_tolerance = 0.0;
  unsigned threads = 0;
};

int cmd_metrics(const MetricsArgs& a, bool averaging_given, Streams s) {
  std::vector<MetricKind> kinds;
  for (const auto& name : split_list(a.metrics)) {
    const auto kind = parse_metric(name);
    if (!kind) throw UsageError("unknown metric '" + name + "' (expected acc, c, cd, ct, ic)");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw UsageError("--metrics selects nothing");
  const bool has_groupwise = std::any_of(kinds.begin(), kinds.end(), [](MetricKind k) {
    return k == MetricKind::CIndexDrugwise || k == MetricKind::CIndexTargetwise;
  });
  if (averaging_given && !has_groupwise) {
    throw UsageError("--averaging applies only to the cd and ct metrics");
  }

  MetricOptions options;
  options.tie_tolerance = a.tie_tolerance;
  options.threads = a.threads;
  options.averaging = a.averaging == "macro" ? Averaging::Macro : Averaging::Pooled;
  options.orientation = a.orientation == "drug"     ? Orientation::DrugPairs
                        : a.orientation == "target" ? Orientation::TargetPairs
                                                    : Orientation::Auto;

  ParseOptions parse;
  parse.format = table_format(a.input, a.input_format);
  parse.dedup = a.dedup == "mean" ? DedupPolicy::Mean : DedupPolicy::Error;
  auto in = open_input(a.input);
  ParsedTable table = parse_table(in, parse);
  PredictionVector pred;
  if (!a.pred_file.empty()) {
    if (table.predictions) throw SchemaError("predictions given both as a pred column and via --pred");
    auto pin = open_input(a.pred_file);
    pred = parse_predictions(pin, table.dataset, table_format(a.pred_file, a.input_format));
  } else if (table.predictions) {
    pred = std::move(*table.predictions);
  } else {
    throw SchemaError("no predictions: add a pred column or pass --pred");
  }

  std::vector<MetricReport> reports;
  for (MetricKind kind : kinds) reports.push_back(evaluate(kind, table.dataset, pred, options));

  Sink sink(a.out, s.out);
  auto& out = sink.get();
  if (a.format == "jsonl") {
    for (const auto& r : reports) {
      nlohmann::ordered_json line;
      line["metric"] = metric_name(r.metric);
      line["value"] = r.value;
      line["numerator"] = r.numerator;
      line["denominator"] = r.denominator;
      line["defaulted"] = r.defaulted;
      out << line.dump() << '\n';
    }
  } else {
    out << header("metric\tvalue\tnumerator\tdenominator\tdefaulted", s.color && !sink.to_file())
        << '\n';
    for (const auto& r : reports) {
      out << metric_name(r.metric) << '\t' << format_real(r.value) << '\t'
          << format_real(r.numerator) << '\t' << r.denominator << '\t'
          << (r.defaulted ? "true" : "false") << '\n';
    }
  }
  return kOk;
}

// --- split -------------------------------------------------------------------

struct SplitArgs {
  std::string input;
  std::string input_format = "auto";
  std::string setting;
  std::string dedup = "error";
  std::string out;
  std::uint64_t seed = 0;
  std::size_t k = 3;
};

int cmd_split(const SplitArgs& a, Streams s) {
  const auto setting = parse_setting(a.setting);
  if (!setting) throw UsageError("unknown setting '" + a.setting + "' (expected idit, odit, idot, odot)");
  ParseOptions parse;
  parse.format = table_format(a.input, a.input_format);
  parse.dedup = a.dedup == "mean" ? DedupPolicy::Mean : DedupPolicy::Error;
  auto in = open_input(a.input);
  const ParsedTable table = parse_table(in, parse);
  const GroupAssignment groups = assign_groups(table.dataset, a.k, a.seed);
  const FoldPlan plan = make_folds(table.dataset, groups, *setting);
  Sink sink(a.out, s.out);
  write_fold_plan(sink.get(), plan, table.dataset);
  return kOk;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
  XorConfig config;
  std::size_t reps = 1000;
  unsigned threads = 0;
  std::string learners = "GS,DS,TS,SS,PS";
  std::string out;
  std::string raw;
};

int cmd_simulate(const SimulateArgs& a, Streams s) {
  std::vector<BaselineKind> learners;
  for (const auto& name : split_list(a.learners)) {
    const auto kind = parse_baseline(name);
    if (!kind) throw UsageError("unknown learner '" + name + "' (expected GS, DS, TS, SS, PS)");
    if (std::find(learners.begin(), learners.end(), *kind) == learners.end()) learners.push_back(*kind);
  }
  if (learners.empty()) throw UsageError("--learners selects nothing");
  if (a.reps == 0) throw UsageError("--reps must be at least 1");
  try {
    a.config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Sink sink(a.out, s.out);
  std::unique_ptr<Sink> raw_sink;
  if (!a.raw.empty()) raw_sink = std::make_unique<Sink>(a.raw, s.out);

  const SimulationResult result = run_xor_experiment(a.config, a.reps, learners, a.threads);
  write_summary_tsv(sink.get(), result);
  if (raw_sink) write_raw_tsv(raw_sink->get(), result);
  return kOk;
}

// --- selftest ----------------------------------------------------------------

int cmd_selftest(const SelftestOptions& options, Streams s) {
  const SelftestReport report = run_selftest(options, s.err);
  if (report.passed()) {
    s.out << "selftest passed: " << report.checks << " checks on " << options.iterations
          << " instances\n";
    return kOk;
  }
  s.out << "selftest FAILED: " << report.failures.size() << " of " << report.checks << " checks\n";
  for (const auto& f : report.failures) {
    s.out << "counterexample " << f.check << " instance-seed=" << f.instance_seed << '\n';
  }
  return kSelftestFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, Streams streams) {
  CLI::App app{"Interaction-aware ranking metrics, OTS splits and XOR simulation"};
  app.name("icindex");
  app.require_subcommand(1);

  MetricsArgs margs;
  auto* metrics = app.add_subcommand("metrics", "Compute metrics for a drug,target,y[,pred] table");
  metrics->add_option("--in", margs.input, "Input table")->required()->check(CLI::ExistingFile);
  metrics->add_option("--pred", margs.pred_file, "Prediction table with drug,target,pred columns")
      ->check(CLI::ExistingFile);
  metrics->add_option("--input-format", margs.input_format, "Input delimiter")
      ->check(CLI::IsMember({"auto", "csv", "tsv"}));
  metrics->add_option("--metrics", margs.metrics, "Comma list of acc,c,cd,ct,ic");
  auto* averaging = metrics->add_option("--averaging", margs.averaging, "Groupwise C-index averaging")
                        ->check(CLI::IsMember({"pooled", "macro"}));
  metrics->add_option("--orientation", margs.orientation, "IC-index pair axis")
      ->check(CLI::IsMember({"auto", "drug", "target"}));
  metrics->add_option("--dedup", margs.dedup, "Duplicate pair policy")
      ->check(CLI::IsMember({"error", "mean"}));
  metrics->add_option("--tie-tolerance", margs.tie_tolerance, "Prediction tie tolerance")
      ->check(CLI::NonNegativeNumber);
  metrics->add_option("--threads", margs.threads, "Worker threads (0 = all cores)");
  metrics->add_option("--format", margs.format, "Output format")
      ->check(CLI::IsMember({"table", "jsonl"}));
  metrics->add_option("--out", margs.out, "Output file (default stdout)");

  SplitArgs sargs;
  auto* split = app.add_subcommand("split", "Write a 3x3 block cross-validation fold plan");
  split->add_option("--in", sargs.input, "Input table")->required()->check(CLI::ExistingFile);
  split->add_option("--input-format", sargs.input_format, "Input delimiter")
      ->check(CLI::IsMember({"auto", "csv", "tsv"}));
  split->add_option("--setting", sargs.setting, "idit, odit, idot or odot")->required();
  split->add_option("--seed", sargs.seed, "Group assignment seed");
  split->add_option("--groups", sargs.k, "Groups per axis")->check(CLI::PositiveNumber);
  split->add_option("--dedup", sargs.dedup, "Duplicate pair policy")
      ->check(CLI::IsMember({"error", "mean"}));
  split->add_option("--out", sargs.out, "Output file (default stdout)");

  SimulateArgs xargs;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation study");
  simulate->require_subcommand(1);
  auto* xor_cmd = simulate->add_subcommand("xor", "Imbalanced XOR study of the sum baselines");
  xor_cmd->add_option("--reps", xargs.reps, "Repetitions");
  xor_cmd->add_option("--seed", xargs.config.seed, "Master seed");
  xor_cmd->add_option("--threads", xargs.threads, "Worker threads (0 = all cores)");
  xor_cmd->add_option("--learners", xargs.learners, "Comma list of GS,DS,TS,SS,PS");
  xor_cmd->add_option("--drugs", xargs.config.n_drugs, "Number of drugs");
  xor_cmd->add_option("--targets", xargs.config.n_targets, "Number of targets");
  xor_cmd->add_option("--drug-threshold", xargs.config.drug_threshold);
  xor_cmd->add_option("--target-threshold", xargs.config.target_threshold);
  xor_cmd->add_option("--noise", xargs.config.noise_rate, "Label flip probability");
  xor_cmd->add_option("--known", xargs.config.known_fraction, "Fraction of cells known");
  xor_cmd->add_option("--out", xargs.out, "Summary output file (default stdout)");
  xor_cmd->add_option("--raw", xargs.raw, "Also write per-repetition values here");

  SelftestOptions targs;
  auto* selftest = app.add_subcommand("selftest", "Run the built-in property checks");
  selftest->add_option("--iterations", targs.iterations, "Random instances");
  selftest->add_option("--max-size", targs.max_size, "Max drugs and targets per instance")
      ->check(CLI::Range(1u, 64u));
  selftest->add_option("--seed", targs.seed, "Master seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, streams.out, streams.err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, streams.out, streams.err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, streams.out, streams.err);
    return kUsage;
  }

  try {
    if (metrics->parsed()) return cmd_metrics(margs, averaging->count() > 0, streams);
    if (split->parsed()) return cmd_split(sargs, streams);
    if (xor_cmd->parsed()) return cmd_simulate(xargs, streams);
    if (selftest->parsed()) return cmd_selftest(targs, streams);
  } catch (const UsageError& e) {
    streams.err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    streams.err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const SchemaError& e) {
    streams.err << "schema error: " << e.what() << '\n';
    return kParseError;
  } catch (const DuplicatePair& e) {
    streams.err << "input error: " << e.what() << '\n';
    return kParseError;
  } catch (const InvalidValue& e) {
    streams.err << "input error: " << e.what() << '\n';
    return kParseError;
  } catch (const AlignmentError& e) {
    streams.err << "alignment error: " << e.what() << '\n';
    return kAlignmentError;
  } catch (const InsufficientEntities& e) {
    streams.err << "split error: " << e.what() << '\n';
    return kInfeasibleSplit;
  } catch (const std::exception& e) {
    streams.err << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace icindex::cli
