#ifndef BEST_CORRELATION_H_
#define BEST_CORRELATION_H_

#include <optional>
#include <span>
#include <vector>

namespace best {

// 1-based ranks, tied values sharing the mean of the ranks they span.
std::vector<double> AverageRanks(std::span<const double> values);

// All three throw InvalidInput on mismatched lengths or fewer than 3
// points, and UndefinedCorrelation when an input is constant.
double Pearson(std::span<const double> x, std::span<const double> y);
double Spearman(std::span<const double> x, std::span<const double> y);
// Tie-corrected tau-b, O(n log n) via Knight's merge-sort count.
double KendallTauB(std::span<const double> x, std::span<const double> y);

struct Correlations {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> kendall;
};

// Each coefficient is left empty when undefined for this input instead of
// failing the whole set.
Correlations ComputeCorrelations(std::span<const double> metrics,
                                 std::span<const double> truths);

}  // namespace best

#endif  // BEST_CORRELATION_H_
