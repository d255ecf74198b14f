#include "best/policy.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "best/error.h"
#include "best/rng.h"
#include "oracles/oracles.h"
#include "test_util.h"

namespace best {
namespace {

using testing::Binary;
using testing::RandomBinary;
using testing::RandomSimplex;

const QuantizationLevel kQ2(2);

// Binary rows placing `counts[b]` samples of `label` at the centre of cell b
// of an 8-level grid.
void FillCells(std::vector<std::pair<double, int>>& rows,
               const std::vector<int>& counts, int label) {
  for (std::size_t b = 0; b < counts.size(); ++b) {
    for (int k = 0; k < counts[b]; ++k) {
      rows.emplace_back((static_cast<double>(b) + 0.5) / 8.0, label);
    }
  }
}

TEST(BuildCounts, SingleCellWhenAllBelowFirstEdge) {
  const auto data = Binary({{0.1, 1}, {0.2, 1}, {0.05, 2}, {0.3, 2}});
  const auto counts = BuildCounts(data, QuantizationLevel(3));
  ASSERT_EQ(counts.bins().size(), 1u);
  EXPECT_EQ(counts.bins().begin()->second, (std::vector<std::int64_t>{2, 2}));
}

TEST(BuildCounts, EightCellConditionalMatrix) {
  std::vector<std::pair<double, int>> rows;
  const std::vector<int> c1 = {3, 3, 2, 1, 1, 0, 0, 0};
  const std::vector<int> c2 = {0, 0, 1, 1, 2, 2, 2, 2};
  FillCells(rows, c1, 1);
  FillCells(rows, c2, 2);
  const auto counts = BuildCounts(Binary(rows), QuantizationLevel(8));
  EXPECT_EQ(counts.per_class_totals()[0], 10);
  EXPECT_EQ(counts.per_class_totals()[1], 10);
  for (std::uint32_t b = 0; b < 8; ++b) {
    const BinKey key(8, {b});
    EXPECT_EQ(counts.Conditional(key, 1), Fraction(c1[b], 10)) << b;
    EXPECT_EQ(counts.Conditional(key, 2), Fraction(c2[b], 10)) << b;
  }
  const auto policy = DerivePolicy(counts);
  EXPECT_EQ(policy.Decide(BinKey(8, {0})), Decision::Single(1));
  EXPECT_EQ(policy.Decide(BinKey(8, {3})), Decision::Tie({1, 2}));
  EXPECT_EQ(policy.Decide(BinKey(8, {7})), Decision::Single(2));
  // Class-1 cells hold 8/10, class-2 cells 8/10, the tie cell 1/10 each.
  EXPECT_EQ(TrainAccuracy(counts, policy), Fraction(17, 20));
}

TEST(BuildCounts, IdenticalProbsDifferentLabelsShareOneCell) {
  const auto data = Binary({{0.4, 1}, {0.4, 1}, {0.4, 2}});
  const auto counts = BuildCounts(data, QuantizationLevel(10));
  ASSERT_EQ(counts.bins().size(), 1u);
  EXPECT_EQ(counts.bins().begin()->second, (std::vector<std::int64_t>{2, 1}));
}

TEST(BuildCounts, RejectsEmptyDataAndMissingClass) {
  EXPECT_THROW(BuildCounts(LabeledDataset(2, 2), kQ2), InvalidInput);
  EXPECT_THROW(BuildCounts(Binary({{0.1, 1}}), kQ2), InvalidInput);
}

TEST(BuildCounts, MergeOfShardsEqualsWholeCount) {
  Rng rng(9);
  const auto data = RandomSimplex(rng, 3, 3, 40);
  const QuantizationLevel q(5);
  const auto whole = BuildCounts(data, q);
  std::vector<std::size_t> a(data.size() / 3), b(data.size() - a.size());
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), a.size());
  ConditionalCounts left(5, 3);
  ConditionalCounts right(5, 3);
  for (auto i : a) left.Increment(Quantize(data.probs(i), q), data.label(i));
  for (auto i : b) right.Increment(Quantize(data.probs(i), q), data.label(i));
  ConditionalCounts lr = left;
  lr.Merge(right);
  ConditionalCounts rl = right;
  rl.Merge(left);
  EXPECT_EQ(lr.bins(), whole.bins());
  EXPECT_EQ(rl.bins(), whole.bins());
  EXPECT_TRUE(std::ranges::equal(lr.per_class_totals(),
                                 whole.per_class_totals()));
  EXPECT_THROW(lr.Merge(ConditionalCounts(6, 3)), InvalidInput);
}

TEST(DerivePolicy, ArgmaxTieAndUnseenCell) {
  // Cell 0 holds conditionals [3/10, 1/10], cell 1 [1/10, 1/10].
  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < 3; ++i) rows.emplace_back(0.1, 1);
  rows.emplace_back(0.1, 2);
  rows.emplace_back(0.3, 1);
  rows.emplace_back(0.3, 2);
  for (int i = 0; i < 6; ++i) rows.emplace_back(0.9, 1);
  for (int i = 0; i < 8; ++i) rows.emplace_back(0.9, 2);
  const auto counts = BuildCounts(Binary(rows), QuantizationLevel(5));
  const auto policy = DerivePolicy(counts);
  EXPECT_EQ(policy.Decide(BinKey(5, {0})), Decision::Single(1));
  EXPECT_EQ(policy.Decide(BinKey(5, {1})), Decision::Tie({1, 2}));
  EXPECT_EQ(policy.Decide(BinKey(5, {2})), Decision::Tie({1, 2}));
  EXPECT_TRUE(policy.Decide(BinKey(5, {2})).is_tie());
}

TEST(DerivePolicy, TieDetectionUsesConditionalsNotRawCounts) {
  // Class totals 2 and 4: raw counts 1 vs 2 are an exact conditional tie.
  const auto data = Binary({{0.1, 1}, {0.9, 1}, {0.1, 2}, {0.1, 2},
                            {0.9, 2}, {0.9, 2}});
  const auto policy = DerivePolicy(BuildCounts(data, kQ2));
  EXPECT_EQ(policy.Decide(BinKey(2, {0})), Decision::Tie({1, 2}));
}

TEST(Decision, TieNeedsTwoDistinctClasses) {
  EXPECT_THROW(Decision::Tie({2, 2}), InvalidInput);
  EXPECT_EQ(Decision::Tie({3, 1, 3}).classes().size(), 2u);
}

TEST(TrainAccuracy, Examples) {
  const auto separated = Binary({{0.1, 1}, {0.2, 1}, {0.8, 2}, {0.9, 2}});
  auto counts = BuildCounts(separated, kQ2);
  EXPECT_EQ(TrainAccuracy(counts, DerivePolicy(counts)), Fraction(1, 1));

  const auto one_cell = Binary({{0.1, 1}, {0.2, 1}, {0.3, 2}, {0.4, 2}});
  counts = BuildCounts(one_cell, kQ2);
  EXPECT_EQ(TrainAccuracy(counts, DerivePolicy(counts)), Fraction(1, 2));

  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < 9; ++i) rows.emplace_back(0.2, 1);
  rows.emplace_back(0.7, 1);
  rows.emplace_back(0.2, 2);
  for (int i = 0; i < 9; ++i) rows.emplace_back(0.7, 2);
  counts = BuildCounts(Binary(rows), kQ2);
  EXPECT_EQ(TrainAccuracy(counts, DerivePolicy(counts)), Fraction(9, 10));
}

TEST(TrainAccuracy, LevelMismatchIsAnError) {
  const auto data = Binary({{0.1, 1}, {0.9, 2}});
  const auto c2 = BuildCounts(data, kQ2);
  const auto c3 = BuildCounts(data, QuantizationLevel(3));
  EXPECT_THROW(TrainAccuracy(c2, DerivePolicy(c3)), InvalidInput);
}

TEST(ValAccuracy, AllTiePolicyScoresOneOverN) {
  Rng rng(1);
  const auto val = RandomSimplex(rng, 3, 3, 7);
  const Policy uniform(4, 3, {});
  EXPECT_EQ(ValAccuracy(val, uniform, QuantizationLevel(4)), Fraction(1, 3));
}

TEST(ValAccuracy, SeparableValEqualsTrainScoresOne) {
  const auto data = Binary({{0.1, 1}, {0.2, 1}, {0.8, 2}, {0.9, 2}});
  const auto policy = DerivePolicy(BuildCounts(data, kQ2));
  EXPECT_EQ(ValAccuracy(data, policy, kQ2), Fraction(1, 1));
}

TEST(ValAccuracy, EmptyOrMismatchedInputIsAnError) {
  const Policy uniform(2, 2, {});
  EXPECT_THROW(ValAccuracy(LabeledDataset(2, 2), uniform, kQ2), InvalidInput);
  EXPECT_THROW(ValAccuracy(Binary({{0.1, 1}}), uniform, QuantizationLevel(3)),
               InvalidInput);
}

TEST(ValAccuracy, ExpectationMatchesSampledTieResolution) {
  // Cell 0: single class 1. Cell 2: tie. Half the val mass lands in each.
  const auto train = Binary({{0.1, 1}, {0.1, 1}, {0.1, 2}, {0.6, 1},
                             {0.6, 2}, {0.6, 2}, {0.9, 1}, {0.9, 2}});
  const auto counts = BuildCounts(train, QuantizationLevel(3));
  const auto policy = DerivePolicy(counts);
  ASSERT_EQ(policy.Decide(BinKey(3, {0})), Decision::Single(1));
  ASSERT_TRUE(policy.Decide(BinKey(3, {2})).is_tie());
  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < 30; ++i) rows.emplace_back(0.1, 1);
  for (int i = 0; i < 20; ++i) rows.emplace_back(0.1, 2);
  for (int i = 0; i < 25; ++i) rows.emplace_back(0.9, 1);
  for (int i = 0; i < 25; ++i) rows.emplace_back(0.9, 2);
  const auto val = Binary(rows);
  const QuantizationLevel q(3);
  // Single-class cell: 30/100 correct. Tie cell: 50/100 at 1/2 each.
  const Fraction exact = ValAccuracy(val, policy, q);
  EXPECT_EQ(exact, Fraction(30, 100) + Fraction(25, 100));

  Rng rng(42);
  const int reps = 4000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double a = ValAccuracySampled(val, policy, q, rng);
    sum += a;
    sum_sq += a * a;
  }
  const double mean = sum / reps;
  const double sd = std::sqrt((sum_sq / reps - mean * mean) / reps);
  EXPECT_LE(std::abs(mean - exact.value()), 3 * sd);
}

TEST(Balance, DownsamplesToSmallestClass) {
  LabeledDataset data(2, 2);
  for (int i = 0; i < 50; ++i) data.Add(std::vector<double>{0.5, 0.5}, 1);
  for (int i = 0; i < 40; ++i) data.Add(std::vector<double>{0.2, 0.8}, 2);
  const auto balanced = Balance(data, 17);
  EXPECT_EQ(balanced.ClassCounts(), (std::vector<std::size_t>{40, 40}));
}

TEST(Balance, BalancedInputIsUnchanged) {
  Rng rng(4);
  const auto data = RandomBinary(rng, 3, 12);
  EXPECT_EQ(Balance(data, 99), data);
}

TEST(Balance, SeededChoiceIsRepeatable) {
  const auto data = Binary({{0.1, 1}, {0.2, 1}, {0.3, 1}, {0.4, 2}, {0.5, 2},
                            {0.6, 2}, {0.11, 3}, {0.22, 3}, {0.33, 3},
                            {0.44, 3}, {0.55, 3}},
                           3);
  const auto a = Balance(data, 2024);
  const auto b = Balance(data, 2024);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.ClassCounts(), (std::vector<std::size_t>{3, 3, 3}));
  bool differs = false;
  for (std::uint64_t s = 0; s < 20 && !differs; ++s) {
    differs = Balance(data, s) != a;
  }
  EXPECT_TRUE(differs);
}

TEST(Balance, EmptyClassIsNamed) {
  const auto data = Binary({{0.1, 1}, {0.9, 2}}, 3);
  try {
    Balance(data, 0);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("class 3"), std::string::npos);
  }
}

// Random binary-source instance with at most `q` reachable cells.
LabeledDataset SmallInstance(Rng& rng, int n, std::int64_t q) {
  LabeledDataset data(2, n);
  for (int y = 1; y <= n; ++y) {
    const int count = 1 + static_cast<int>(rng.UniformIndex(9));
    for (int i = 0; i < count; ++i) {
      const double cell = static_cast<double>(rng.UniformIndex(
          static_cast<std::uint64_t>(q)));
      const double p2 = (cell + rng.Uniform01()) / static_cast<double>(q);
      data.Add(std::vector<double>{1.0 - p2, p2}, y);
    }
  }
  return data;
}

TEST(PolicyProperty, DerivedPolicyIsOptimalByEnumeration) {
  Rng rng(77);
  for (int inst = 0; inst < 60; ++inst) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(2));
    const std::int64_t q = 2 + static_cast<std::int64_t>(rng.UniformIndex(7));
    const auto data = SmallInstance(rng, n, q);
    const auto counts = BuildCounts(data, QuantizationLevel(q));
    const Fraction derived = TrainAccuracy(counts, DerivePolicy(counts));
    const auto table = oracle::CountByScan(data, q);
    ASSERT_LE(table.rows.size(), 8u);
    EXPECT_EQ(derived, oracle::BestTrainAccuracyByEnumeration(table));
    EXPECT_EQ(derived, oracle::RowMaxTrainAccuracy(table));
  }
}

TEST(PolicyProperty, LowerBoundAndRange) {
  Rng rng(8);
  for (int inst = 0; inst < 50; ++inst) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(4));
    const auto train = RandomSimplex(rng, 3, n, 5 + inst % 7);
    const auto val = RandomSimplex(rng, 3, n, 4);
    const QuantizationLevel q(2 + inst % 9);
    const auto counts = BuildCounts(train, q);
    const auto policy = DerivePolicy(counts);
    const Fraction tr = TrainAccuracy(counts, policy);
    const Fraction va = ValAccuracy(val, policy, q);
    EXPECT_GE(tr, Fraction(1, n));
    EXPECT_LE(tr, Fraction(1, 1));
    EXPECT_GE(va, Fraction(0, 1));
    EXPECT_LE(va, Fraction(1, 1));
  }
}

TEST(PolicyProperty, RefinementNeverLowersTrainAccuracy) {
  Rng rng(12);
  for (int inst = 0; inst < 30; ++inst) {
    const auto train = RandomSimplex(rng, 2 + inst % 3, 2 + inst % 2, 15);
    for (std::int64_t q = 2; q <= 12; ++q) {
      const auto base = BuildCounts(train, QuantizationLevel(q));
      const Fraction a = TrainAccuracy(base, DerivePolicy(base));
      for (std::int64_t k : {2, 3}) {
        const auto fine = BuildCounts(train, QuantizationLevel(k * q));
        EXPECT_GE(TrainAccuracy(fine, DerivePolicy(fine)), a);
      }
    }
  }
}

TEST(PolicyProperty, LabelPermutationEquivariance) {
  Rng rng(21);
  const std::vector<int> perm = {3, 1, 2};  // label c -> perm[c-1]
  for (int inst = 0; inst < 20; ++inst) {
    const auto train = RandomSimplex(rng, 3, 3, 8);
    const auto val = RandomSimplex(rng, 3, 3, 6);
    const auto relabel = [&](const LabeledDataset& d) {
      LabeledDataset out(d.source_classes(), d.target_classes());
      for (std::size_t i = 0; i < d.size(); ++i) {
        out.Add(d.probs(i), perm[static_cast<std::size_t>(d.label(i) - 1)]);
      }
      return out;
    };
    const QuantizationLevel q(3);
    const auto c0 = BuildCounts(train, q);
    const auto c1 = BuildCounts(relabel(train), q);
    const auto p0 = DerivePolicy(c0);
    const auto p1 = DerivePolicy(c1);
    EXPECT_EQ(TrainAccuracy(c0, p0), TrainAccuracy(c1, p1));
    EXPECT_EQ(ValAccuracy(val, p0, q), ValAccuracy(relabel(val), p1, q));
    for (const auto& [key, decision] : p0.decisions()) {
      std::vector<int> mapped;
      for (int c : decision.classes()) {
        mapped.push_back(perm[static_cast<std::size_t>(c - 1)]);
      }
      const Decision expected = mapped.size() == 1
                                    ? Decision::Single(mapped[0])
                                    : Decision::Tie(mapped);
      EXPECT_EQ(p1.Decide(key), expected);
    }
  }
}

TEST(PolicyProperty, UnseenValidationCellsScoreOneOverN) {
  const auto train = Binary({{0.05, 1}, {0.06, 2}, {0.07, 1}, {0.08, 2}}, 2);
  const QuantizationLevel q(10);
  const auto policy = DerivePolicy(BuildCounts(train, q));
  const auto val = Binary({{0.55, 1}, {0.65, 2}, {0.95, 2}, {0.45, 1}});
  EXPECT_EQ(ValAccuracy(val, policy, q), Fraction(1, 2));
}

TEST(PolicyProperty, ValAccuracyMatchesPerSampleSum) {
  Rng rng(31);
  for (int inst = 0; inst < 20; ++inst) {
    const auto train = RandomSimplex(rng, 3, 3, 10);
    const auto val = RandomSimplex(rng, 3, 3, 9);
    const QuantizationLevel q(4);
    const auto policy = DerivePolicy(BuildCounts(train, q));
    double expected = 0.0;
    for (std::size_t i = 0; i < val.size(); ++i) {
      const auto& d = policy.Decide(Quantize(val.probs(i), q));
      if (d.Contains(val.label(i))) {
        expected += 1.0 / static_cast<double>(d.classes().size());
      }
    }
    expected /= static_cast<double>(val.size());
    EXPECT_NEAR(ValAccuracy(val, policy, q).value(), expected, 1e-12);
  }
}

}  // namespace
}  // namespace best
