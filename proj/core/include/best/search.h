#ifndef BEST_SEARCH_H_
#define BEST_SEARCH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "best/dataset.h"
#include "best/fraction.h"

namespace best {

struct SearchConfig {
  std::int64_t tolerance = 5;
  std::int64_t max_steps = 20;
  std::int64_t q_min = 2;
  // Defaults to the per-class validation count n_val / n after balancing.
  std::optional<std::int64_t> q_max;
  std::uint64_t seed = 0;

  // Throws InvalidInput on tolerance < 1, max_steps < 1, q_min < 2 or an
  // explicit q_max below q_min.
  void Validate() const;
};

enum class SearchMethod { kTernary, kBrute };

std::string ToString(SearchMethod method);
SearchMethod ParseSearchMethod(const std::string& name);

// Train and validation accuracy of the optimal policy at one level.
struct ProbeRecord {
  std::int64_t q = 0;
  Fraction train;
  Fraction val;
};

struct MetricResult {
  SearchMethod method = SearchMethod::kTernary;
  // The metric M. Ternary: mean of A_val at the final left and right ends.
  // Brute force: max of A_val over the whole range.
  Fraction metric;
  // Level of the best validation accuracy among all probes (smallest q on
  // ties).
  std::int64_t q_star = 0;
  std::int64_t final_left = 0;
  std::int64_t final_right = 0;
  std::int64_t q_min = 0;
  std::int64_t q_max = 0;
  int steps = 0;
  // One record per distinct level evaluated, in evaluation order.
  std::vector<ProbeRecord> trace;
};

// Accuracy pair of the policy derived on `train` at level q, scored on
// `val`.
ProbeRecord EvaluateLevel(const LabeledDataset& train,
                          const LabeledDataset& val, std::int64_t q);

struct TernaryBounds {
  std::int64_t left = 0;
  std::int64_t right = 0;
  int steps = 0;
};

// Integer ternary search for the maximum of `value` on [lo, hi]. Probes the
// third points m1 = floor(L + (R-L)/3) and m2 = ceil(R - (R-L)/3); moves L
// to m1 when value(m1) < value(m2), otherwise R to m2. Stops once
// R - L <= tolerance, after max_steps steps, or when R - L < 3 and the
// third points coincide with L and R.
template <typename ValueFn>
TernaryBounds TernarySearchMax(std::int64_t lo, std::int64_t hi,
                               std::int64_t tolerance, std::int64_t max_steps,
                               ValueFn&& value) {
  TernaryBounds b{lo, hi, 0};
  while (b.right - b.left > tolerance && b.steps < max_steps) {
    const std::int64_t third = (b.right - b.left) / 3;
    if (third == 0) break;
    const std::int64_t m1 = b.left + third;
    const std::int64_t m2 = b.right - third;
    if (value(m1) < value(m2)) {
      b.left = m1;
    } else {
      b.right = m2;
    }
    ++b.steps;
  }
  return b;
}

// Balances both splits, then locates q* by ternary search over
// [q_min, q_max]. Throws InsufficientData when q_max < q_min.
MetricResult MetricTernary(const LabeledDataset& train,
                           const LabeledDataset& val, const SearchConfig& cfg);

// Balances both splits, then evaluates every level in [q_min, q_max].
MetricResult MetricBrute(const LabeledDataset& train,
                         const LabeledDataset& val, const SearchConfig& cfg);

MetricResult ComputeMetric(const LabeledDataset& train,
                           const LabeledDataset& val, const SearchConfig& cfg,
                           SearchMethod method);

// Accuracy pair at every listed level, on the data as given.
std::vector<ProbeRecord> SweepCurve(const LabeledDataset& train,
                                    const LabeledDataset& val,
                                    std::span<const std::int64_t> q_list);

}  // namespace best

#endif  // BEST_SEARCH_H_
