#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "best/cpu_timer.h"
#include "best/density.h"
#include "best/dump_io.h"
#include "best/error.h"
#include "best/policy.h"
#include "best/protocol.h"
#include "best/rng.h"
#include "best/search.h"
#include "best/synth.h"
#include "best/theorem_sim.h"
#include "experiments.h"
#include "report.h"

namespace best::tools {
namespace {

namespace fs = std::filesystem;

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string FmtOpt(const std::optional<double>& v) {
  return v ? Fmt(*v) : "undefined";
}

std::int64_t ToLevel(std::string_view s, const std::string& item) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("bad level list item '" + item + "'");
  }
  return v;
}

fs::path ResolveOutputDir(const std::string& flag) {
  fs::path dir;
  if (!flag.empty()) {
    dir = flag;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    dir = env;
  } else {
    dir = "best-out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

struct SearchFlags {
  std::string method = "ternary";
  std::int64_t tolerance = 5;
  std::int64_t max_steps = 20;
  std::int64_t q_min = 2;
  std::optional<std::int64_t> q_max;
  std::uint64_t seed = 0;

  void Register(CLI::App* app, bool with_method) {
    if (with_method) {
      app->add_option("--search", method, "ternary or brute")
          ->check(CLI::IsMember({"ternary", "brute"}))
          ->capture_default_str();
    }
    app->add_option("--tolerance", tolerance, "stop once R - L <= tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--max-steps", max_steps, "ternary step cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--q-min", q_min, "smallest level searched")
        ->capture_default_str();
    app->add_option("--q-max", q_max,
                    "largest level searched (default: per-class val count)");
    app->add_option("--seed", seed, "master seed")->capture_default_str();
  }

  SearchConfig Config() const {
    SearchConfig cfg;
    cfg.tolerance = tolerance;
    cfg.max_steps = max_steps;
    cfg.q_min = q_min;
    cfg.q_max = q_max;
    cfg.seed = seed;
    cfg.Validate();
    return cfg;
  }

  Json Manifest(bool with_method) const {
    Json j;
    if (with_method) j["search"] = method;
    j["tolerance"] = tolerance;
    j["max_steps"] = max_steps;
    j["q_min"] = q_min;
    j["q_max"] = q_max ? Json(*q_max) : Json(nullptr);
    j["seed"] = seed;
    return j;
  }
};

struct SplitPaths {
  std::string train;
  std::string val;

  void Register(CLI::App* app) {
    app->add_option("--train", train, "train-split dump")->required();
    app->add_option("--val", val, "val-split dump")->required();
  }
};

struct LoadedPair {
  std::string source_id;
  LabeledDataset train;
  LabeledDataset val;
};

LoadedPair LoadPair(const SplitPaths& paths) {
  DumpFile train = ReadDump(paths.train);
  DumpFile val = ReadDump(paths.val);
  if (train.header.m != val.header.m || train.header.n != val.header.n) {
    throw InvalidInput("train and val dumps disagree on m or n");
  }
  return {train.header.source_id, std::move(train.data), std::move(val.data)};
}

// ---------------------------------------------------------------- score

struct ScoreCommand {
  SplitPaths paths;
  SearchFlags search;
  std::string out;

  void Register(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("score", "metric of one source");
    paths.Register(sub);
    search.Register(sub, true);
    sub->add_option("--out", out, "output directory");
    sub->callback([this] { Run(); });
  }

  void Run() {
    const SearchConfig cfg = search.Config();
    const SearchMethod method = ParseSearchMethod(search.method);
    const LoadedPair pair = LoadPair(paths);
    const fs::path dir = ResolveOutputDir(out);

    CpuTimer timer;
    const MetricResult result =
        ComputeMetric(pair.train, pair.val, cfg, method);
    const double cpu = timer.Elapsed();

    Json doc = ReportHeader("best.score");
    doc["manifest"] = {{"command", "score"},
                       {"train", paths.train},
                       {"val", paths.val},
                       {"search", search.Manifest(true)}};
    doc["seeds"] = {{"master", cfg.seed},
                    {"balance_train", DeriveSeed(cfg.seed, 0)},
                    {"balance_val", DeriveSeed(cfg.seed, 1)}};
    doc["source_id"] = pair.source_id;
    doc["result"] = ToJson(result);
    WriteJson(dir / "score.json", doc);

    CsvTable trace("trace", {"q", "train_acc", "val_acc"});
    for (const auto& p : result.trace) {
      trace.AddRow({std::to_string(p.q), FormatValue(p.train.value()),
                    FormatValue(p.val.value())});
    }
    trace.Write(dir / "trace.csv");

    CsvTable timing("timing", {"source_id", "cpu_seconds"});
    timing.AddRow({pair.source_id, FormatValue(cpu)});
    timing.Write(dir / "timing.csv");

    std::cout << "score source=" << pair.source_id
              << " method=" << ToString(method)
              << " M=" << Fmt(result.metric.value())
              << " q*=" << result.q_star << " L=" << result.final_left
              << " R=" << result.final_right
              << " probes=" << result.trace.size() << '\n';
  }
};

// ---------------------------------------------------------------- rank

struct RankCommand {
  std::string sources;
  std::string truth;
  double threshold = 0.0;
  double slack = 0.03;
  std::string slack_mode = "absolute";
  double tl_frac = 1.0;
  int iterations = 1;
  unsigned jobs = 0;
  SearchFlags search;
  std::string out;

  void Register(CLI::App& app) {
    CLI::App* sub =
        app.add_subcommand("rank", "score and rank a directory of sources");
    sub->add_option("--sources", sources, "directory of train/val dumps")
        ->required();
    sub->add_option("--truth", truth, "ground-truth csv (source_id,accuracy)");
    sub->add_option("--threshold", threshold,
                    "keep sources whose truth exceeds this")
        ->capture_default_str();
    sub->add_option("--slack", slack, "rank correctness slack")
        ->capture_default_str();
    sub->add_option("--slack-mode", slack_mode, "absolute or relative")
        ->check(CLI::IsMember({"absolute", "relative"}))
        ->capture_default_str();
    sub->add_option("--tl-frac", tl_frac,
                    "fraction of target rows kept per iteration")
        ->capture_default_str();
    sub->add_option("--iterations", iterations, "subsampling iterations")
        ->capture_default_str();
    sub->add_option("--jobs", jobs, "worker threads (0 = all cores)")
        ->capture_default_str();
    search.Register(sub, true);
    sub->add_option("--out", out, "output directory");
    sub->callback([this] { Run(); });
  }

  void Run() {
    ProtocolConfig cfg;
    cfg.search = search.Config();
    cfg.method = ParseSearchMethod(search.method);
    cfg.tl_frac = tl_frac;
    cfg.iterations = iterations;
    cfg.seed = search.seed;
    cfg.report.threshold = threshold;
    cfg.report.slack = slack;
    cfg.report.slack_mode = ParseSlackMode(slack_mode);
    cfg.jobs = jobs;
    cfg.Validate();

    const std::vector<SourceData> data = LoadSourceDirectory(sources);
    std::optional<GroundTruth> gt;
    if (!truth.empty()) gt = ReadTruth(truth);
    const fs::path dir = ResolveOutputDir(out);

    const ProtocolResult result = RunProtocol(data, gt, cfg);

    Json doc = ReportHeader("best.rank");
    doc["manifest"] = {{"command", "rank"},
                       {"sources", sources},
                       {"truth", truth.empty() ? Json(nullptr) : Json(truth)},
                       {"threshold", threshold},
                       {"slack", slack},
                       {"slack_mode", slack_mode},
                       {"tl_frac", tl_frac},
                       {"iterations", iterations},
                       {"search", search.Manifest(true)}};
    Json iteration_seeds = Json::array();
    for (const auto& it : result.iterations) iteration_seeds.push_back(it.seed);
    doc["seeds"] = {{"master", cfg.seed}, {"iterations", iteration_seeds}};
    Json mean_metric = Json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
      mean_metric.push_back({{"source_id", data[i].source_id},
                             {"metric", result.mean_metric[i]}});
    }
    doc["mean_metric"] = std::move(mean_metric);
    if (result.summary) {
      doc["fraction_correct"] = result.summary->mean_fraction_correct;
      doc["summary"] = ToJson(*result.summary);
    } else {
      doc["fraction_correct"] = nullptr;
      doc["summary"] = nullptr;
    }
    Json iters = Json::array();
    for (const auto& it : result.iterations) iters.push_back(ToJson(it));
    doc["iterations"] = std::move(iters);
    WriteJson(dir / "rank.json", doc);

    CsvTable scores("scores",
                    {"iteration", "source_id", "metric", "q_star", "rank"});
    CsvTable timing("timing", {"iteration", "source_id", "cpu_seconds"});
    for (std::size_t k = 0; k < result.iterations.size(); ++k) {
      const auto& it = result.iterations[k];
      for (std::size_t i = 0; i < it.scores.size(); ++i) {
        const auto& s = it.scores[i];
        scores.AddRow({std::to_string(k), s.source_id, FormatValue(s.metric),
                       std::to_string(s.q_star), std::to_string(it.ranks[i])});
        timing.AddRow(
            {std::to_string(k), s.source_id, FormatValue(s.cpu_seconds)});
      }
    }
    scores.Write(dir / "scores.csv");
    timing.Write(dir / "timing.csv");

    const auto& first = result.iterations.front();
    const auto top = std::find(first.ranks.begin(), first.ranks.end(), 1) -
                     first.ranks.begin();
    std::cout << "rank sources=" << data.size()
              << " iterations=" << result.iterations.size()
              << " top=" << first.scores[static_cast<std::size_t>(top)].source_id;
    if (result.summary) {
      const auto& s = *result.summary;
      std::cout << " survivors=" << first.report->source_ids.size()
                << " fraction_correct=" << Fmt(s.mean_fraction_correct)
                << " mean_dev=" << Fmt(s.mean_rank_dev)
                << " spearman=" << FmtOpt(s.mean_spearman);
    }
    std::cout << '\n';
  }
};

// ---------------------------------------------------------------- sweep

struct SweepCommand {
  SplitPaths paths;
  std::string levels;
  bool no_balance = false;
  std::uint64_t seed = 0;
  std::string out;

  void Register(CLI::App& app) {
    CLI::App* sub = app.add_subcommand(
        "sweep", "train and val accuracy of the optimal policy per level");
    paths.Register(sub);
    sub->add_option("--q", levels,
                    "levels, e.g. 2,4,8 or 2:50 (default: 2 to the per-class "
                    "val count)");
    sub->add_flag("--no-balance", no_balance,
                  "use the splits as given instead of balancing them");
    sub->add_option("--seed", seed, "balancing seed")->capture_default_str();
    sub->add_option("--out", out, "output directory");
    sub->callback([this] { Run(); });
  }

  void Run() {
    LoadedPair pair = LoadPair(paths);
    if (!no_balance) {
      pair.train = Balance(pair.train, DeriveSeed(seed, 0));
      pair.val = Balance(pair.val, DeriveSeed(seed, 1));
    }
    std::vector<std::int64_t> qs;
    if (levels.empty()) {
      const auto counts = pair.val.ClassCounts();
      const auto per_class = static_cast<std::int64_t>(
          *std::min_element(counts.begin(), counts.end()));
      if (per_class < 2) {
        throw InsufficientData("validation split has fewer than 2 samples "
                               "in some class");
      }
      for (std::int64_t q = 2; q <= per_class; ++q) qs.push_back(q);
    } else {
      qs = ParseLevels(levels);
    }
    const fs::path dir = ResolveOutputDir(out);
    const auto rows = SweepCurve(pair.train, pair.val, qs);

    CsvTable csv("sweep", {"q", "train_acc", "val_acc"});
    Json curve = Json::array();
    std::size_t peak = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      csv.AddRow({std::to_string(r.q), FormatValue(r.train.value()),
                  FormatValue(r.val.value())});
      curve.push_back({{"q", r.q},
                       {"train_acc", r.train.value()},
                       {"val_acc", r.val.value()}});
      if (r.val > rows[peak].val) peak = i;
    }
    csv.Write(dir / "sweep.csv");

    Json doc = ReportHeader("best.sweep");
    doc["manifest"] = {{"command", "sweep"},
                       {"train", paths.train},
                       {"val", paths.val},
                       {"q", levels.empty() ? Json(nullptr) : Json(levels)},
                       {"balance", !no_balance},
                       {"seed", seed}};
    doc["seeds"] = no_balance ? Json(nullptr)
                              : Json({{"master", seed},
                                      {"balance_train", DeriveSeed(seed, 0)},
                                      {"balance_val", DeriveSeed(seed, 1)}});
    doc["source_id"] = pair.source_id;
    doc["peak"] = curve[peak];
    doc["curve"] = std::move(curve);
    WriteJson(dir / "sweep.json", doc);

    std::cout << "sweep source=" << pair.source_id << " levels=" << rows.size()
              << " peak_q=" << rows[peak].q
              << " peak_val_acc=" << Fmt(rows[peak].val.value())
              << " train_acc_first=" << Fmt(rows.front().train.value())
              << " train_acc_last=" << Fmt(rows.back().train.value()) << '\n';
  }
};

// ------------------------------------------------------- simulate-theorem

struct TheoremCommand {
  std::string f1 = "poly-mirrored:0:2";
  std::string f2 = "poly:0:2";
  std::int64_t n = 100;
  std::string levels = "2,4,8,16,32,64,128,256,1024,4096,16384,100000";
  int trials = 50;
  double epsilon = 0.1;
  double delta = 0.5;
  std::string val_mode = "analytic";
  std::int64_t val_per_class = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out;

  void Register(CLI::App& app) {
    CLI::App* sub = app.add_subcommand(
        "simulate-theorem",
        "expected validation accuracy of binary policies as q grows");
    sub->add_option("--f1", f1, "density of p_2 given label 1")
        ->capture_default_str();
    sub->add_option("--f2", f2, "density of p_2 given label 2")
        ->capture_default_str();
    sub->add_option("--n", n, "training samples per class")
        ->capture_default_str();
    sub->add_option("--q", levels, "increasing level schedule")
        ->capture_default_str();
    sub->add_option("--trials", trials, "training draws per level")
        ->capture_default_str();
    sub->add_option("--epsilon", epsilon, "accuracy gap")
        ->capture_default_str();
    sub->add_option("--delta", delta, "violation probability")
        ->capture_default_str();
    sub->add_option("--val-mode", val_mode, "analytic or sampled")
        ->check(CLI::IsMember({"analytic", "sampled"}))
        ->capture_default_str();
    sub->add_option("--val-per-class", val_per_class,
                    "validation draws per class in sampled mode")
        ->capture_default_str();
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--jobs", jobs, "worker threads (0 = all cores)")
        ->capture_default_str();
    sub->add_option("--out", out, "output directory");
    sub->callback([this] { Run(); });
  }

  void Run() {
    const BoundedDensity d1 = BoundedDensity::Parse(f1);
    const BoundedDensity d2 = BoundedDensity::Parse(f2);
    TheoremRunConfig cfg;
    cfg.n = n;
    cfg.q_schedule = ParseLevels(levels);
    cfg.trials = trials;
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.seed = seed;
    cfg.options.val_mode = ParseValMode(val_mode);
    cfg.options.val_per_class = val_per_class;
    cfg.options.jobs = jobs;
    const double bound = std::max(d1.Bound(), d2.Bound());
    cfg.Validate(bound);
    const fs::path dir = ResolveOutputDir(out);

    const auto rows = ConvergenceSweep(cfg, d1, d2);

    CsvTable csv("theorem_sweep",
                 {"q", "mean_val_acc", "stderr", "bound_q", "satisfied"});
    Json table = Json::array();
    for (const auto& r : rows) {
      csv.AddRow({std::to_string(r.q), FormatValue(r.mean_val_acc),
                  FormatValue(r.stderr_mean), FormatValue(r.bound_q),
                  r.satisfied ? "true" : "false"});
      table.push_back(ToJson(r));
    }
    csv.Write(dir / "theorem.csv");

    Json doc = ReportHeader("best.theorem");
    doc["manifest"] = {{"command", "simulate-theorem"},
                       {"f1", d1.ToString()},
                       {"f2", d2.ToString()},
                       {"n", n},
                       {"q", cfg.q_schedule},
                       {"trials", trials},
                       {"epsilon", epsilon},
                       {"delta", delta},
                       {"val_mode", val_mode},
                       {"val_per_class", val_per_class},
                       {"seed", seed}};
    Json trial_seeds = Json::array();
    for (int t = 0; t < trials; ++t) {
      trial_seeds.push_back(DeriveSeed(seed, static_cast<std::uint64_t>(t)));
    }
    doc["seeds"] = {{"master", seed}, {"trials", trial_seeds}};
    doc["density_bound"] = bound;
    doc["bound_q"] = rows.front().bound_q;
    doc["rows"] = std::move(table);
    WriteJson(dir / "theorem.json", doc);

    const auto& last = rows.back();
    std::cout << "simulate-theorem B=" << Fmt(bound)
              << " bound_q=" << Fmt(last.bound_q) << " levels=" << rows.size()
              << " final_q=" << last.q
              << " final_mean=" << Fmt(last.mean_val_acc)
              << " final_violation=" << Fmt(last.violation_fraction) << '\n';
  }
};

// ---------------------------------------------------------------- gen-synth

struct SynthFlags {
  int m = 2;
  int n = 2;
  std::int64_t per_class = 250;
  std::string geometry = "offset";
  std::string profile = "smooth";

  void Register(CLI::App* sub) {
    sub->add_option("--m", m, "source classes")->capture_default_str();
    sub->add_option("--n", n, "target classes")->capture_default_str();
    sub->add_option("--per-class", per_class, "samples per target class")
        ->capture_default_str();
    sub->add_option("--geometry", geometry, "aligned or offset")
        ->check(CLI::IsMember({"aligned", "offset"}))
        ->capture_default_str();
    sub->add_option("--profile", profile, "flat or smooth class blocks")
        ->check(CLI::IsMember({"flat", "smooth"}))
        ->capture_default_str();
  }

  SynthSpec Base() const {
    SynthSpec s;
    s.m = m;
    s.n = n;
    s.per_class = per_class;
    s.geometry = ParseGeometry(geometry);
    s.profile = ParseProfile(profile);
    return s;
  }

  Json Manifest() const {
    return {{"m", m}, {"n", n}, {"per_class", per_class},
            {"geometry", geometry}, {"profile", profile}};
  }
};

struct GenSynthCommand {
  SynthFlags synth;
  int count = 45;
  double overlap_min = 0.01;
  double overlap_max = 0.89;
  double val_frac = 0.2;
  std::uint64_t seed = 0;
  std::string out;

  void Register(CLI::App& app) {
    CLI::App* sub = app.add_subcommand(
        "gen-synth", "synthetic source family with ground-truth accuracies");
    synth.Register(sub);
    sub->add_option("--count", count, "number of sources (>= 3)")
        ->capture_default_str();
    sub->add_option("--overlap-min", overlap_min, "overlap of the first source")
        ->capture_default_str();
    sub->add_option("--overlap-max", overlap_max, "overlap of the last source")
        ->capture_default_str();
    sub->add_option("--val-frac", val_frac, "share of each class sent to val")
        ->capture_default_str();
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--out", out, "output directory");
    sub->callback([this] { Run(); });
  }

  void Run() {
    const auto specs = OverlapFamily(synth.Base(), count, overlap_min,
                                     overlap_max, seed);
    const SynthFamily family = GenerateFamily(specs, val_frac);
    const fs::path dir = ResolveOutputDir(out);

    Json members = Json::array();
    for (const auto& member : family.members) {
      DumpHeader header{member.spec.m, member.spec.n, member.source_id,
                        Split::kTrain};
      WriteDump(dir / (member.source_id + "_train.csv"), header,
                member.data.train);
      header.split = Split::kVal;
      WriteDump(dir / (member.source_id + "_val.csv"), header,
                member.data.val);
      members.push_back({{"source_id", member.source_id},
                         {"overlap", member.spec.overlap},
                         {"seed", member.spec.seed},
                         {"bayes_accuracy", family.truth.at(member.source_id)},
                         {"train_rows", member.data.train.size()},
                         {"val_rows", member.data.val.size()}});
    }
    WriteTruth(dir / "truth.csv", family.truth);

    Json doc = ReportHeader("best.synth");
    Json manifest = {{"command", "gen-synth"}};
    manifest.update(synth.Manifest());
    manifest["count"] = count;
    manifest["overlap_min"] = overlap_min;
    manifest["overlap_max"] = overlap_max;
    manifest["val_frac"] = val_frac;
    manifest["seed"] = seed;
    doc["manifest"] = std::move(manifest);
    Json source_seeds = Json::array();
    for (const auto& s : specs) source_seeds.push_back(s.seed);
    doc["seeds"] = {{"master", seed}, {"sources", source_seeds}};
    doc["sources"] = std::move(members);
    WriteJson(dir / "synth.json", doc);

    const auto& first = family.members.front().data;
    std::cout << "gen-synth sources=" << family.members.size()
              << " train_rows=" << first.train.size()
              << " val_rows=" << first.val.size() << " out=" << dir.string()
              << '\n';
  }
};

// ---------------------------------------------------------- compare-search

struct CompareCommand {
  std::string sources;
  SynthFlags synth;
  int pairs = 100;
  double overlap_min = 0.0;
  double overlap_max = 0.5;
  double val_frac = 0.2;
  unsigned jobs = 0;
  SearchFlags search;
  std::string out;

  void Register(CLI::App& app) {
    CLI::App* sub = app.add_subcommand(
        "compare-search", "metric deviation of ternary search from brute force");
    sub->add_option("--sources", sources,
                    "directory of dumps (default: seeded synthetic pairs)");
    synth.per_class = 50;
    synth.Register(sub);
    sub->add_option("--pairs", pairs, "synthetic pairs")->capture_default_str();
    sub->add_option("--overlap-min", overlap_min, "overlap of the first pair")
        ->capture_default_str();
    sub->add_option("--overlap-max", overlap_max, "overlap of the last pair")
        ->capture_default_str();
    sub->add_option("--val-frac", val_frac, "share of each class sent to val")
        ->capture_default_str();
    sub->add_option("--jobs", jobs, "worker threads (0 = all cores)")
        ->capture_default_str();
    search.Register(sub, false);
    sub->add_option("--out", out, "output directory");
    sub->callback([this] { Run(); });
  }

  void Run() {
    const SearchConfig search_cfg = search.Config();
    std::vector<ComparisonRow> rows;
    Json manifest = {{"command", "compare-search"}};
    if (!sources.empty()) {
      const auto data = LoadSourceDirectory(sources);
      rows = CompareSearchSources(data, search_cfg, jobs);
      manifest["sources"] = sources;
    } else {
      SyntheticComparisonConfig cfg;
      cfg.base = synth.Base();
      cfg.pairs = pairs;
      cfg.overlap_min = overlap_min;
      cfg.overlap_max = overlap_max;
      cfg.val_frac = val_frac;
      cfg.search = search_cfg;
      cfg.seed = search.seed;
      cfg.jobs = jobs;
      rows = CompareSearchSynthetic(cfg);
      manifest["sources"] = nullptr;
      manifest.update(synth.Manifest());
      manifest["pairs"] = pairs;
      manifest["overlap_min"] = overlap_min;
      manifest["overlap_max"] = overlap_max;
      manifest["val_frac"] = val_frac;
    }
    manifest["search"] = search.Manifest(false);
    const fs::path dir = ResolveOutputDir(out);
    const ComparisonSummary summary = Summarize(rows);

    CsvTable csv("compare_search",
                 {"source_id", "overlap", "seed", "m_ternary", "m_brute",
                  "abs_diff", "q_star_ternary", "q_star_brute",
                  "probes_ternary", "probes_brute"});
    Json table = Json::array();
    Json seeds = Json::array();
    for (const auto& r : rows) {
      csv.AddRow({r.source_id, FormatValue(r.overlap), std::to_string(r.seed),
                  FormatValue(r.ternary.metric.value()),
                  FormatValue(r.brute.metric.value()), FormatValue(r.abs_diff),
                  std::to_string(r.ternary.q_star),
                  std::to_string(r.brute.q_star),
                  std::to_string(r.ternary.trace.size()),
                  std::to_string(r.brute.trace.size())});
      table.push_back({{"source_id", r.source_id},
                       {"overlap", r.overlap},
                       {"seed", r.seed},
                       {"m_ternary", r.ternary.metric.value()},
                       {"m_brute", r.brute.metric.value()},
                       {"abs_diff", r.abs_diff},
                       {"q_star_ternary", r.ternary.q_star},
                       {"q_star_brute", r.brute.q_star},
                       {"final_left", r.ternary.final_left},
                       {"final_right", r.ternary.final_right},
                       {"q_max", r.brute.q_max}});
      seeds.push_back(r.seed);
    }
    csv.Write(dir / "compare.csv");

    Json doc = ReportHeader("best.compare_search");
    doc["manifest"] = std::move(manifest);
    doc["seeds"] = {{"master", search.seed}, {"pairs", seeds}};
    doc["summary"] = {{"pairs", summary.pairs},
                      {"mean_abs_diff", summary.mean_abs_diff},
                      {"max_abs_diff", summary.max_abs_diff},
                      {"std_abs_diff", summary.std_abs_diff},
                      {"mean_ternary_probes", summary.mean_ternary_probes},
                      {"mean_brute_probes", summary.mean_brute_probes}};
    doc["rows"] = std::move(table);
    WriteJson(dir / "compare.json", doc);

    std::cout << "compare-search pairs=" << summary.pairs
              << " mean_abs_diff=" << Fmt(summary.mean_abs_diff)
              << " max_abs_diff=" << Fmt(summary.max_abs_diff)
              << " mean_probes_ternary=" << Fmt(summary.mean_ternary_probes)
              << " mean_probes_brute=" << Fmt(summary.mean_brute_probes)
              << '\n';
  }
};

int ReportError(const char* kind, const std::exception& e, int code) {
  std::cerr << "best: " << kind << ": " << e.what() << '\n';
  return code;
}

}  // namespace

std::vector<std::int64_t> ParseLevels(const std::string& text) {
  std::vector<std::int64_t> levels;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view()
                                           : rest.substr(comma + 1);
    std::vector<std::string_view> parts;
    std::string_view s = item;
    while (true) {
      const auto colon = s.find(':');
      parts.push_back(s.substr(0, colon));
      if (colon == std::string_view::npos) break;
      s = s.substr(colon + 1);
    }
    if (parts.size() == 1) {
      levels.push_back(ToLevel(parts[0], item));
    } else if (parts.size() <= 3) {
      const std::int64_t lo = ToLevel(parts[0], item);
      const std::int64_t hi = ToLevel(parts[1], item);
      const std::int64_t step = parts.size() == 3 ? ToLevel(parts[2], item) : 1;
      if (step < 1 || hi < lo) {
        throw InvalidInput("bad level range '" + item + "'");
      }
      for (std::int64_t q = lo; q <= hi; q += step) levels.push_back(q);
    } else {
      throw InvalidInput("bad level list item '" + item + "'");
    }
  }
  if (levels.empty()) throw InvalidInput("empty level list");
  for (const auto q : levels) {
    if (q < 2) throw InvalidInput("levels must be >= 2");
  }
  return levels;
}

int RunCli(int argc, char** argv) {
  CLI::App app{"Quantization-based transferability scoring of source models",
               "best"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "best 0.1.0");

  ScoreCommand score;
  RankCommand rank;
  SweepCommand sweep;
  TheoremCommand theorem;
  GenSynthCommand gen_synth;
  CompareCommand compare;
  score.Register(app);
  rank.Register(app);
  sweep.Register(app);
  theorem.Register(app);
  gen_synth.Register(app);
  compare.Register(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const NoSurvivors& e) {
    return ReportError("no survivors", e, kExitNoSurvivors);
  } catch (const InsufficientData& e) {
    return ReportError("insufficient data", e, kExitInsufficientData);
  } catch (const ParseError& e) {
    return ReportError("parse error", e, kExitParse);
  } catch (const IoError& e) {
    return ReportError("i/o error", e, kExitIo);
  } catch (const InvalidInput& e) {
    return ReportError("invalid input", e, kExitInvalid);
  } catch (const DomainError& e) {
    return ReportError("domain error", e, kExitInvalid);
  } catch (const std::exception& e) {
    return ReportError("error", e, kExitFailure);
  }
  return kExitOk;
}

}  // namespace best::tools
