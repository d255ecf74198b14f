#ifndef BEST_TOOLS_EXPERIMENTS_H_
#define BEST_TOOLS_EXPERIMENTS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "best/protocol.h"
#include "best/search.h"
#include "best/synth.h"

namespace best::tools {

// Ternary search against brute force on the same balanced splits.
struct ComparisonRow {
  std::string source_id;
  double overlap = 0.0;  // synthetic pairs only
  std::uint64_t seed = 0;
  MetricResult ternary;
  MetricResult brute;
  double abs_diff = 0.0;
};

struct ComparisonSummary {
  std::size_t pairs = 0;
  double mean_abs_diff = 0.0;
  double max_abs_diff = 0.0;
  double std_abs_diff = 0.0;  // population
  double mean_ternary_probes = 0.0;
  double mean_brute_probes = 0.0;
};

struct SyntheticComparisonConfig {
  // m, n, per_class and geometry are shared by every pair; overlap runs
  // linearly over [overlap_min, overlap_max] and pair i is generated and
  // searched with seed DeriveSeed(seed, i).
  SynthSpec base;
  int pairs = 100;
  double overlap_min = 0.0;
  double overlap_max = 0.5;
  double val_frac = 0.2;
  SearchConfig search;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

std::vector<ComparisonRow> CompareSearchSynthetic(
    const SyntheticComparisonConfig& cfg);

// Compares on existing sources; source i is searched with seed
// DeriveSeed(search.seed, i).
std::vector<ComparisonRow> CompareSearchSources(
    std::span<const SourceData> sources, const SearchConfig& search,
    unsigned jobs);

ComparisonSummary Summarize(std::span<const ComparisonRow> rows);

}  // namespace best::tools

#endif  // BEST_TOOLS_EXPERIMENTS_H_
