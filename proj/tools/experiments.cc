#include "experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "best/error.h"
#include "best/parallel.h"
#include "best/rng.h"

namespace best::tools {
namespace {

void FillComparison(ComparisonRow& row, const LabeledDataset& train,
                    const LabeledDataset& val, SearchConfig search) {
  search.seed = row.seed;
  row.ternary = MetricTernary(train, val, search);
  row.brute = MetricBrute(train, val, search);
  row.abs_diff = std::abs(row.ternary.metric.value() - row.brute.metric.value());
}

}  // namespace

std::vector<ComparisonRow> CompareSearchSynthetic(
    const SyntheticComparisonConfig& cfg) {
  if (cfg.pairs < 1) throw InvalidInput("pairs must be >= 1");
  cfg.search.Validate();
  const auto specs = OverlapFamily(cfg.base, cfg.pairs, cfg.overlap_min,
                                   cfg.overlap_max, cfg.seed);
  for (const auto& s : specs) s.Validate();
  std::vector<ComparisonRow> rows(specs.size());
  ParallelFor(specs.size(), cfg.jobs, [&](std::size_t i) {
    ComparisonRow& row = rows[i];
    char id[32];
    std::snprintf(id, sizeof(id), "pair%03zu", i);
    row.source_id = id;
    row.overlap = specs[i].overlap;
    row.seed = specs[i].seed;
    const SplitDatasets split = SplitByRows(Generate(specs[i]), cfg.val_frac);
    FillComparison(row, split.train, split.val, cfg.search);
  });
  return rows;
}

std::vector<ComparisonRow> CompareSearchSources(
    std::span<const SourceData> sources, const SearchConfig& search,
    unsigned jobs) {
  search.Validate();
  std::vector<ComparisonRow> rows(sources.size());
  ParallelFor(sources.size(), jobs, [&](std::size_t i) {
    ComparisonRow& row = rows[i];
    row.source_id = sources[i].source_id;
    row.seed = DeriveSeed(search.seed, i);
    FillComparison(row, sources[i].train, sources[i].val, search);
  });
  return rows;
}

ComparisonSummary Summarize(std::span<const ComparisonRow> rows) {
  ComparisonSummary s;
  s.pairs = rows.size();
  if (rows.empty()) return s;
  const double count = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    s.mean_abs_diff += r.abs_diff;
    s.max_abs_diff = std::max(s.max_abs_diff, r.abs_diff);
    s.mean_ternary_probes += static_cast<double>(r.ternary.trace.size());
    s.mean_brute_probes += static_cast<double>(r.brute.trace.size());
  }
  s.mean_abs_diff /= count;
  s.mean_ternary_probes /= count;
  s.mean_brute_probes /= count;
  double ss = 0.0;
  for (const auto& r : rows) {
    ss += (r.abs_diff - s.mean_abs_diff) * (r.abs_diff - s.mean_abs_diff);
  }
  s.std_abs_diff = std::sqrt(ss / count);
  return s;
}

}  // namespace best::tools
