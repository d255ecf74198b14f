#include "best/ranking.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "best/error.h"

namespace best {
namespace {

// Absorbs representation error in differences such as 0.95 - 0.92.
constexpr double kSlackEpsilon = 1e-12;

void CheckPermutation(std::span<const int> ranks) {
  std::vector<int> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i) + 1) {
      throw InvalidInput("rank vector is not a permutation of 1..p");
    }
  }
}

std::optional<Correlations> MaybeCorrelations(std::span<const double> a,
                                              std::span<const double> b) {
  if (a.size() < 3) return std::nullopt;
  return ComputeCorrelations(a, b);
}

}  // namespace

std::vector<int> RankByValue(std::span<const std::string> ids,
                             std::span<const double> values) {
  if (ids.size() != values.size()) {
    throw InvalidInput("ids and values differ in length");
  }
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return ids[a] < ids[b];
  });
  std::vector<int> ranks(ids.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranks[order[r]] = static_cast<int>(r) + 1;
  }
  return ranks;
}

std::vector<int> RankSources(std::span<const SourceScore> scores) {
  std::vector<std::string> ids;
  std::vector<double> metrics;
  ids.reserve(scores.size());
  metrics.reserve(scores.size());
  for (const SourceScore& s : scores) {
    ids.push_back(s.source_id);
    metrics.push_back(s.metric);
  }
  return RankByValue(ids, metrics);
}

FilteredSources ThresholdFilter(std::span<const SourceScore> scores,
                                const GroundTruth& truth, double threshold) {
  FilteredSources out;
  for (const SourceScore& s : scores) {
    const auto it = truth.find(s.source_id);
    if (it == truth.end()) {
      throw InvalidInput("no ground truth for source '" + s.source_id + "'");
    }
    if (it->second > threshold) {
      out.scores.push_back(s);
      out.truths.push_back(it->second);
    }
  }
  if (out.scores.empty()) {
    throw NoSurvivors("no sources above threshold " +
                      std::to_string(threshold));
  }
  return out;
}

std::string ToString(SlackMode mode) {
  return mode == SlackMode::kAbsolute ? "absolute" : "relative";
}

SlackMode ParseSlackMode(const std::string& name) {
  if (name == "absolute") return SlackMode::kAbsolute;
  if (name == "relative") return SlackMode::kRelative;
  throw InvalidInput("unknown slack mode '" + name + "'");
}

double CorrectnessWithSlack(std::span<const int> ranks_by_metric,
                            std::span<const int> ranks_by_truth,
                            std::span<const double> truths, double slack,
                            SlackMode mode) {
  const std::size_t p = ranks_by_metric.size();
  if (ranks_by_truth.size() != p || truths.size() != p) {
    throw InvalidInput("rank vectors and truths differ in length");
  }
  if (p == 0) throw InvalidInput("no sources to compare");
  CheckPermutation(ranks_by_metric);
  CheckPermutation(ranks_by_truth);
  // occupant[r] = index of the source holding rank r + 1.
  std::vector<std::size_t> predicted(p);
  std::vector<std::size_t> actual(p);
  for (std::size_t i = 0; i < p; ++i) {
    predicted[static_cast<std::size_t>(ranks_by_metric[i] - 1)] = i;
    actual[static_cast<std::size_t>(ranks_by_truth[i] - 1)] = i;
  }
  std::size_t correct = 0;
  for (std::size_t r = 0; r < p; ++r) {
    const double got = truths[predicted[r]];
    const double want = truths[actual[r]];
    const double allowed =
        mode == SlackMode::kAbsolute ? slack : slack * std::abs(want);
    if (std::abs(got - want) <= allowed + kSlackEpsilon) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(p);
}

RankDeviation ComputeRankDeviation(std::span<const int> ranks_by_metric,
                                   std::span<const int> ranks_by_truth) {
  if (ranks_by_metric.size() != ranks_by_truth.size()) {
    throw InvalidInput("rank vectors differ in length");
  }
  if (ranks_by_metric.empty()) throw InvalidInput("no ranks to compare");
  CheckPermutation(ranks_by_metric);
  CheckPermutation(ranks_by_truth);
  const auto p = static_cast<double>(ranks_by_metric.size());
  std::vector<double> dev(ranks_by_metric.size());
  for (std::size_t i = 0; i < dev.size(); ++i) {
    dev[i] = std::abs(ranks_by_metric[i] - ranks_by_truth[i]);
  }
  RankDeviation d;
  d.mean = std::accumulate(dev.begin(), dev.end(), 0.0) / p;
  double ss = 0.0;
  for (const double v : dev) ss += (v - d.mean) * (v - d.mean);
  d.std = std::sqrt(ss / p);
  return d;
}

RankReport EvaluateRanking(std::span<const SourceScore> scores,
                           const GroundTruth& truth, const ReportConfig& cfg) {
  RankReport report;
  report.config = cfg;

  std::vector<double> all_metrics;
  std::vector<double> all_truths;
  for (const SourceScore& s : scores) {
    const auto it = truth.find(s.source_id);
    if (it == truth.end()) {
      throw InvalidInput("no ground truth for source '" + s.source_id + "'");
    }
    all_metrics.push_back(s.metric);
    all_truths.push_back(it->second);
  }
  if (auto c = MaybeCorrelations(all_metrics, all_truths)) {
    report.family_correlations = *c;
  }

  const FilteredSources kept = ThresholdFilter(scores, truth, cfg.threshold);
  for (const SourceScore& s : kept.scores) {
    report.source_ids.push_back(s.source_id);
    report.metrics.push_back(s.metric);
  }
  report.truths = kept.truths;
  report.ranks_by_metric = RankByValue(report.source_ids, report.metrics);
  report.ranks_by_truth = RankByValue(report.source_ids, report.truths);
  report.fraction_correct =
      CorrectnessWithSlack(report.ranks_by_metric, report.ranks_by_truth,
                           report.truths, cfg.slack, cfg.slack_mode);
  report.correct = static_cast<std::size_t>(std::llround(
      report.fraction_correct * static_cast<double>(report.source_ids.size())));
  const RankDeviation dev =
      ComputeRankDeviation(report.ranks_by_metric, report.ranks_by_truth);
  report.mean_dev = dev.mean;
  report.std_dev = dev.std;
  if (auto c = MaybeCorrelations(report.metrics, report.truths)) {
    report.correlations = *c;
  }
  return report;
}

}  // namespace best
