#ifndef BEST_PROTOCOL_H_
#define BEST_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "best/dataset.h"
#include "best/ranking.h"
#include "best/rng.h"
#include "best/search.h"

namespace best {

// One candidate source: its softmax outputs on the target train and
// validation splits. All sources of a run must list the same target rows in
// the same order.
struct SourceData {
  std::string source_id;
  LabeledDataset train;
  LabeledDataset val;
};

// Class-stratified sample of row indices: each class keeps
// max(1, round(frac * count)) of its rows, chosen uniformly. Returned
// indices are sorted.
std::vector<std::size_t> StratifiedSubsample(std::span<const int> labels,
                                             int target_classes, double frac,
                                             Rng& rng);

struct ProtocolConfig {
  SearchConfig search;
  SearchMethod method = SearchMethod::kTernary;
  double tl_frac = 1.0;
  int iterations = 1;
  std::uint64_t seed = 0;
  ReportConfig report;
  unsigned jobs = 1;

  void Validate() const;
};

struct IterationResult {
  std::uint64_t seed = 0;
  std::size_t train_rows = 0;
  std::size_t val_rows = 0;
  std::vector<SourceScore> scores;  // input order
  std::vector<int> ranks;           // by metric, aligned with scores
  std::optional<RankReport> report;
};

struct ProtocolSummary {
  double mean_fraction_correct = 0.0;
  // Correct ranks pooled over iterations divided by pooled survivor count.
  double pooled_fraction_correct = 0.0;
  double mean_rank_dev = 0.0;
  double mean_rank_std = 0.0;
  std::optional<double> mean_pearson;
  std::optional<double> mean_spearman;
  std::optional<double> mean_kendall;
};

struct ProtocolResult {
  std::vector<IterationResult> iterations;
  // Per-source metric averaged over iterations, input order.
  std::vector<double> mean_metric;
  std::optional<ProtocolSummary> summary;  // present when truth is given
};

// Scores every source on `iterations` tl_frac subsamples (seeds derived from
// cfg.seed), ranks them and, with ground truth, evaluates each iteration.
ProtocolResult RunProtocol(std::span<const SourceData> sources,
                           const std::optional<GroundTruth>& truth,
                           const ProtocolConfig& cfg);

}  // namespace best

#endif  // BEST_PROTOCOL_H_
