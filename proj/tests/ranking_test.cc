#include "best/ranking.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "best/correlation.h"
#include "best/error.h"
#include "best/rng.h"
#include "oracles/oracles.h"

namespace best {
namespace {

std::vector<SourceScore> Scores(const std::vector<std::string>& ids,
                                const std::vector<double>& metrics) {
  std::vector<SourceScore> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.push_back({ids[i], metrics[i], 2, 0.0});
  }
  return out;
}

std::vector<double> RandomVector(Rng& rng, std::size_t size) {
  std::vector<double> v(size);
  for (auto& x : v) x = rng.Uniform01();
  return v;
}

TEST(RankSources, HighestMetricFirst) {
  const auto scores = Scores({"a", "b", "c"}, {0.9, 0.7, 0.8});
  EXPECT_EQ(RankSources(scores), (std::vector<int>{1, 3, 2}));
}

TEST(RankSources, TiesFollowIdOrder) {
  const auto scores = Scores({"c", "a", "b", "d"}, {0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(RankSources(scores), (std::vector<int>{3, 1, 2, 4}));
}

TEST(RankSources, Deterministic) {
  Rng rng(2);
  std::vector<std::string> ids;
  std::vector<double> metrics;
  for (int i = 0; i < 45; ++i) {
    ids.push_back("src" + std::to_string(i));
    metrics.push_back(std::round(rng.Uniform01() * 10) / 10);
  }
  const auto scores = Scores(ids, metrics);
  const auto ranks = RankSources(scores);
  EXPECT_EQ(ranks, RankSources(scores));
  std::vector<int> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(45);
  std::iota(expected.begin(), expected.end(), 1);
  EXPECT_EQ(sorted, expected);
}

TEST(ThresholdFilter, KeepsStrictlyAbove) {
  const auto scores = Scores({"a", "b", "c"}, {0.1, 0.2, 0.3});
  const GroundTruth truth = {{"a", 0.95}, {"b", 0.85}, {"c", 0.92}};
  const auto kept = ThresholdFilter(scores, truth, 0.9);
  ASSERT_EQ(kept.scores.size(), 2u);
  EXPECT_EQ(kept.scores[0].source_id, "a");
  EXPECT_EQ(kept.scores[1].source_id, "c");
  EXPECT_EQ(kept.truths, (std::vector<double>{0.95, 0.92}));
  EXPECT_EQ(ThresholdFilter(scores, truth, 0.0).scores.size(), 3u);
  EXPECT_EQ(ThresholdFilter(scores, truth, 0.92).scores.size(), 1u);
}

TEST(ThresholdFilter, Errors) {
  const auto scores = Scores({"a", "b"}, {0.1, 0.2});
  EXPECT_THROW(ThresholdFilter(scores, {{"a", 0.5}, {"b", 0.6}}, 0.9),
               NoSurvivors);
  EXPECT_THROW(ThresholdFilter(scores, {{"a", 0.5}}, 0.0), InvalidInput);
}

TEST(CorrectnessWithSlack, IdenticalRanksAllCorrect) {
  const std::vector<int> ranks = {2, 1, 3};
  const std::vector<double> truths = {0.5, 0.9, 0.1};
  EXPECT_EQ(CorrectnessWithSlack(ranks, ranks, truths, 0.0), 1.0);
}

TEST(CorrectnessWithSlack, NarrowSwapForgiven) {
  const std::vector<double> truths = {0.95, 0.94, 0.80};
  const std::vector<int> by_truth = {1, 2, 3};
  const std::vector<int> by_metric = {2, 1, 3};
  EXPECT_EQ(CorrectnessWithSlack(by_metric, by_truth, truths, 0.03), 1.0);
}

TEST(CorrectnessWithSlack, WideSwapCostsBothPositions) {
  const std::vector<double> truths = {0.95, 0.85, 0.80};
  const std::vector<int> by_truth = {1, 2, 3};
  const std::vector<int> by_metric = {2, 1, 3};
  EXPECT_DOUBLE_EQ(CorrectnessWithSlack(by_metric, by_truth, truths, 0.03),
                   1.0 / 3.0);
}

TEST(CorrectnessWithSlack, RelativeMode) {
  const std::vector<double> truths = {0.50, 0.49};
  const std::vector<int> by_truth = {1, 2};
  const std::vector<int> by_metric = {2, 1};
  // |0.49 - 0.50| = 0.01; relative to the true occupant that is 2% or 2.04%.
  EXPECT_EQ(CorrectnessWithSlack(by_metric, by_truth, truths, 0.0205,
                                 SlackMode::kRelative),
            1.0);
  EXPECT_EQ(CorrectnessWithSlack(by_metric, by_truth, truths, 0.0201,
                                 SlackMode::kRelative),
            0.5);
  EXPECT_EQ(ParseSlackMode("relative"), SlackMode::kRelative);
  EXPECT_THROW(ParseSlackMode("percent"), InvalidInput);
}

TEST(CorrectnessWithSlack, ExactMatchIgnoresSlack) {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto truths = RandomVector(rng, 12);
    std::vector<std::string> ids;
    for (int k = 0; k < 12; ++k) ids.push_back(std::to_string(100 + k));
    const auto ranks = RankByValue(ids, truths);
    EXPECT_EQ(CorrectnessWithSlack(ranks, ranks, truths, 0.0), 1.0);
  }
}

TEST(RankDeviation, Examples) {
  const std::vector<int> id4 = {1, 2, 3, 4};
  const std::vector<int> rev4 = {4, 3, 2, 1};
  const RankDeviation same = ComputeRankDeviation(id4, id4);
  EXPECT_EQ(same.mean, 0.0);
  EXPECT_EQ(same.std, 0.0);
  EXPECT_DOUBLE_EQ(ComputeRankDeviation(rev4, id4).mean, 2.0);
  EXPECT_DOUBLE_EQ(ComputeRankDeviation(rev4, id4).std, 1.0);

  std::vector<int> ten(10);
  std::iota(ten.begin(), ten.end(), 1);
  std::vector<int> swapped = ten;
  std::swap(swapped[3], swapped[4]);
  EXPECT_DOUBLE_EQ(ComputeRankDeviation(swapped, ten).mean, 0.2);
}

TEST(RankDeviationProperty, ZeroMeanIffIdentical) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    std::vector<int> a(8);
    std::iota(a.begin(), a.end(), 1);
    std::vector<int> b = a;
    for (std::size_t k = b.size(); k > 1; --k) {
      std::swap(b[k - 1], b[rng.UniformIndex(k)]);
    }
    EXPECT_EQ(ComputeRankDeviation(a, b).mean == 0.0, a == b);
  }
}

TEST(Correlations, PerfectAndAntiMonotone) {
  const std::vector<double> x = {0.3, 0.1, 0.7, 0.5, 0.9};
  std::vector<double> neg;
  for (double v : x) neg.push_back(2.0 - v);
  EXPECT_NEAR(Pearson(x, x), 1.0, 1e-12);
  EXPECT_NEAR(Spearman(x, x), 1.0, 1e-12);
  EXPECT_NEAR(KendallTauB(x, x), 1.0, 1e-12);
  EXPECT_NEAR(Pearson(x, neg), -1.0, 1e-12);
  EXPECT_NEAR(Spearman(x, neg), -1.0, 1e-12);
  EXPECT_NEAR(KendallTauB(x, neg), -1.0, 1e-12);
}

TEST(Correlations, Errors) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> c = {4, 4, 4};
  const std::vector<double> shorter = {1, 2};
  EXPECT_THROW(Pearson(x, c), UndefinedCorrelation);
  EXPECT_THROW(Spearman(c, x), UndefinedCorrelation);
  EXPECT_THROW(KendallTauB(x, c), UndefinedCorrelation);
  EXPECT_THROW(Pearson(shorter, shorter), InvalidInput);
  EXPECT_THROW(KendallTauB(x, shorter), InvalidInput);

  const Correlations partial = ComputeCorrelations(x, c);
  EXPECT_FALSE(partial.pearson.has_value());
  EXPECT_FALSE(partial.kendall.has_value());
}

TEST(AverageRanks, TiesShareMeanRank) {
  const std::vector<double> v = {10, 20, 10, 30, 20};
  EXPECT_EQ(AverageRanks(v), (std::vector<double>{1.5, 3.5, 1.5, 5, 3.5}));
}

TEST(Correlations, MatchReferenceOn45Vectors) {
  Rng rng(45);
  const auto x = RandomVector(rng, 45);
  const auto y = RandomVector(rng, 45);
  EXPECT_NEAR(Pearson(x, y), oracle::GslPearson(x, y), 1e-9);
  EXPECT_NEAR(Spearman(x, y), oracle::GslSpearman(x, y), 1e-9);
  EXPECT_NEAR(KendallTauB(x, y), oracle::KendallTauBPairs(x, y), 1e-9);
}

TEST(Correlations, MatchReferenceWithTies) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::size_t size = 3 + rng.UniformIndex(40);
    std::vector<double> x(size);
    std::vector<double> y(size);
    for (std::size_t k = 0; k < size; ++k) {
      x[k] = static_cast<double>(rng.UniformIndex(5));
      y[k] = static_cast<double>(rng.UniformIndex(4));
    }
    const auto minmax_x = std::minmax_element(x.begin(), x.end());
    const auto minmax_y = std::minmax_element(y.begin(), y.end());
    if (*minmax_x.first == *minmax_x.second ||
        *minmax_y.first == *minmax_y.second) {
      continue;
    }
    ASSERT_NEAR(Spearman(x, y), oracle::GslSpearman(x, y), 1e-9);
    ASSERT_NEAR(KendallTauB(x, y), oracle::KendallTauBPairs(x, y), 1e-9);
    ASSERT_NEAR(Pearson(x, y), oracle::GslPearson(x, y), 1e-9);
  }
}

TEST(CorrelationProperty, RankCoefficientsIgnoreMonotoneTransforms) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto x = RandomVector(rng, 20);
    const auto y = RandomVector(rng, 20);
    std::vector<double> fx;
    std::vector<double> ax;
    for (double v : x) {
      fx.push_back(std::exp(5 * v) + v * v * v);
      ax.push_back(3.5 * v - 2.0);
    }
    EXPECT_NEAR(Spearman(fx, y), Spearman(x, y), 1e-12);
    EXPECT_NEAR(KendallTauB(fx, y), KendallTauB(x, y), 1e-12);
    EXPECT_NEAR(Pearson(ax, y), Pearson(x, y), 1e-12);
  }
}

TEST(EvaluateRanking, ReportIsConsistent) {
  const auto scores =
      Scores({"s1", "s2", "s3", "s4", "s5"}, {0.9, 0.6, 0.8, 0.7, 0.1});
  const GroundTruth truth = {
      {"s1", 0.99}, {"s2", 0.93}, {"s3", 0.97}, {"s4", 0.91}, {"s5", 0.5}};
  ReportConfig cfg;
  cfg.threshold = 0.9;
  const RankReport r = EvaluateRanking(scores, truth, cfg);
  EXPECT_EQ(r.source_ids, (std::vector<std::string>{"s1", "s2", "s3", "s4"}));
  EXPECT_EQ(r.ranks_by_metric, (std::vector<int>{1, 4, 2, 3}));
  EXPECT_EQ(r.ranks_by_truth, (std::vector<int>{1, 3, 2, 4}));
  // Ranks 3 and 4 swap: |0.93 - 0.91| = 0.02 <= 0.03.
  EXPECT_EQ(r.correct, 4u);
  EXPECT_EQ(r.fraction_correct, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_dev, 0.5);
  ASSERT_TRUE(r.family_correlations.spearman.has_value());
  EXPECT_NEAR(*r.family_correlations.spearman, 0.9, 1e-12);

  const RankReport again = EvaluateRanking(scores, truth, cfg);
  EXPECT_EQ(again.ranks_by_metric, r.ranks_by_metric);
  EXPECT_EQ(again.mean_dev, r.mean_dev);
}

}  // namespace
}  // namespace best
