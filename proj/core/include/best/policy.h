#ifndef BEST_POLICY_H_
#define BEST_POLICY_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "best/dataset.h"
#include "best/fraction.h"
#include "best/quantize.h"
#include "best/rng.h"

namespace best {

// Sparse empirical class-conditional distribution of quantized training
// data. counts(key)[c] is the number of class c+1 samples in that cell, so
// the conditional estimate is counts(key)[c] / per_class_totals()[c].
class ConditionalCounts {
 public:
  using Map =
      std::unordered_map<BinKey, std::vector<std::int64_t>, BinKeyHash>;

  ConditionalCounts(std::int64_t level, int target_classes);

  std::int64_t level() const { return level_; }
  int target_classes() const { return n_; }
  const Map& bins() const { return bins_; }
  std::span<const std::int64_t> per_class_totals() const { return totals_; }

  // Estimate of Pr(cell = key | Y = label), 0 for unseen cells.
  Fraction Conditional(const BinKey& key, int label) const;

  void Increment(const BinKey& key, int label);

  // Adds the counts of `other` (same level and n). Associative and
  // commutative, so partial counts built on disjoint shards can be reduced
  // in any order.
  void Merge(const ConditionalCounts& other);

 private:
  std::int64_t level_;
  int n_;
  Map bins_;
  std::vector<std::int64_t> totals_;
};

// Throws InvalidInput if `data` is empty or a class has no samples.
ConditionalCounts BuildCounts(const LabeledDataset& data, QuantizationLevel q);

// Label decision for one cell: a single class, or a uniform tie among
// k >= 2 classes.
class Decision {
 public:
  static Decision Single(int label);
  static Decision Tie(std::vector<int> labels);

  bool is_tie() const { return classes_.size() > 1; }
  // Sorted ascending, size 1 for a single-class decision.
  std::span<const int> classes() const { return classes_; }
  bool Contains(int label) const;

  friend bool operator==(const Decision&, const Decision&) = default;

 private:
  explicit Decision(std::vector<int> classes) : classes_(std::move(classes)) {}
  std::vector<int> classes_;
};

// Cell -> decision map. Cells without an entry fall back to a tie among all
// n classes (a uniform guess).
class Policy {
 public:
  using Map = std::unordered_map<BinKey, Decision, BinKeyHash>;

  Policy(std::int64_t level, int target_classes, Map decisions);

  std::int64_t level() const { return level_; }
  int target_classes() const { return n_; }
  const Map& decisions() const { return decisions_; }
  const Decision& default_decision() const { return default_; }

  const Decision& Decide(const BinKey& key) const;

 private:
  std::int64_t level_;
  int n_;
  Map decisions_;
  Decision default_;
};

// Argmax of the per-cell conditional estimates; exact ties become Tie().
Policy DerivePolicy(const ConditionalCounts& counts);

// Expected training accuracy (1/n) sum_i mean_{c in S_i} P^_{i,c}.
// For the derived policy this is (1/n) sum_i max_c P^_{i,c}.
Fraction TrainAccuracy(const ConditionalCounts& counts, const Policy& policy);

// Expected validation accuracy: a sample scores 1 when its label is the
// single decision, 1/k when it is inside a k-way tie, 0 otherwise.
Fraction ValAccuracy(const LabeledDataset& val, const Policy& policy,
                     QuantizationLevel q);

// Same quantity with ties resolved by actual uniform draws.
double ValAccuracySampled(const LabeledDataset& val, const Policy& policy,
                          QuantizationLevel q, Rng& rng);

// Downsamples every class to the smallest class count, choosing uniformly
// without replacement. Kept rows retain their original order.
LabeledDataset Balance(const LabeledDataset& data, std::uint64_t seed);

}  // namespace best

#endif  // BEST_POLICY_H_
