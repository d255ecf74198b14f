#ifndef BEST_RANKING_H_
#define BEST_RANKING_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "best/correlation.h"

namespace best {

struct SourceScore {
  std::string source_id;
  double metric = 0.0;
  std::int64_t q_star = 0;
  double cpu_seconds = 0.0;
};

// source_id -> transfer accuracy in [0, 1].
using GroundTruth = std::map<std::string, double>;

// Rank of each entry (1 = largest value), aligned with the input order.
// Equal values are ordered by id, lexicographically.
std::vector<int> RankByValue(std::span<const std::string> ids,
                             std::span<const double> values);

// RankByValue over the scores' metrics.
std::vector<int> RankSources(std::span<const SourceScore> scores);

struct FilteredSources {
  std::vector<SourceScore> scores;
  std::vector<double> truths;  // aligned with scores
};

// Keeps sources whose truth exceeds `threshold`. Throws InvalidInput when a
// score has no truth entry and NoSurvivors when nothing is kept.
FilteredSources ThresholdFilter(std::span<const SourceScore> scores,
                                const GroundTruth& truth, double threshold);

enum class SlackMode { kAbsolute, kRelative };

std::string ToString(SlackMode mode);
SlackMode ParseSlackMode(const std::string& name);

// Predicted rank r is correct when the truth of the source predicted at r
// is within `slack` of the truth of the source whose true rank is r
// (absolute difference, or relative to the latter). Returns the fraction
// of correct ranks.
double CorrectnessWithSlack(std::span<const int> ranks_by_metric,
                            std::span<const int> ranks_by_truth,
                            std::span<const double> truths, double slack,
                            SlackMode mode = SlackMode::kAbsolute);

struct RankDeviation {
  double mean = 0.0;
  double std = 0.0;  // population
};

RankDeviation ComputeRankDeviation(std::span<const int> ranks_by_metric,
                                   std::span<const int> ranks_by_truth);

struct ReportConfig {
  double threshold = 0.0;
  double slack = 0.03;
  SlackMode slack_mode = SlackMode::kAbsolute;
};

struct RankReport {
  // Survivors of the threshold filter, in input order.
  std::vector<std::string> source_ids;
  std::vector<double> metrics;
  std::vector<double> truths;
  std::vector<int> ranks_by_metric;
  std::vector<int> ranks_by_truth;
  std::size_t correct = 0;
  double fraction_correct = 0.0;
  double mean_dev = 0.0;
  double std_dev = 0.0;
  Correlations correlations;         // over survivors
  Correlations family_correlations;  // over every scored source
  ReportConfig config;
};

RankReport EvaluateRanking(std::span<const SourceScore> scores,
                           const GroundTruth& truth, const ReportConfig& cfg);

}  // namespace best

#endif  // BEST_RANKING_H_
