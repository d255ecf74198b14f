#include "best/correlation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>

#include "best/error.h"

namespace best {
namespace {

void CheckPair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidInput("correlation inputs differ in length");
  }
  if (x.size() < 3) throw InvalidInput("correlation needs at least 3 points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidInput("correlation input is not finite");
    }
  }
}

// Number of tied pairs: sum over runs of equal values of t(t-1)/2. `v` must
// be sorted.
std::int64_t TiedPairs(std::span<const double> v) {
  std::int64_t pairs = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i < v.size() && v[i] == v[i - 1]) {
      ++run;
    } else {
      pairs += static_cast<std::int64_t>(run * (run - 1) / 2);
      run = 1;
    }
  }
  return pairs;
}

// Sorts `v` and returns the number of inversions.
std::int64_t MergeCountInversions(std::vector<double>& v,
                                  std::vector<double>& buf, std::size_t lo,
                                  std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = MergeCountInversions(v, buf, lo, mid) +
                       MergeCountInversions(v, buf, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                    std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) hold one tie group.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelation("pearson undefined for constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  try {
    return Pearson(rx, ry);
  } catch (const UndefinedCorrelation&) {
    throw UndefinedCorrelation("spearman undefined for constant input");
  }
}

double KendallTauB(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  const std::size_t n = x.size();
  std::vector<std::pair<double, double>> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {x[i], y[i]};
  std::sort(pts.begin(), pts.end());

  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = pts[i].first;
    ys[i] = pts[i].second;
  }
  const std::int64_t tied_x = TiedPairs(xs);
  // Pairs tied in both coordinates: runs of identical points.
  std::int64_t tied_xy = 0;
  {
    std::size_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      if (i < n && pts[i] == pts[i - 1]) {
        ++run;
      } else {
        tied_xy += static_cast<std::int64_t>(run * (run - 1) / 2);
        run = 1;
      }
    }
  }
  std::vector<double> buf(n);
  const std::int64_t swaps = MergeCountInversions(ys, buf, 0, n);
  const std::int64_t tied_y = TiedPairs(ys);

  const auto total = static_cast<std::int64_t>(n * (n - 1) / 2);
  const double denom = std::sqrt(static_cast<double>(total - tied_x) *
                                 static_cast<double>(total - tied_y));
  if (denom == 0.0) {
    throw UndefinedCorrelation("kendall tau-b undefined for constant input");
  }
  const auto concordant_minus_discordant =
      static_cast<double>(total - tied_x - tied_y + tied_xy - 2 * swaps);
  return std::clamp(concordant_minus_discordant / denom, -1.0, 1.0);
}

Correlations ComputeCorrelations(std::span<const double> metrics,
                                 std::span<const double> truths) {
  CheckPair(metrics, truths);
  Correlations c;
  try {
    c.pearson = Pearson(metrics, truths);
  } catch (const UndefinedCorrelation&) {
  }
  try {
    c.spearman = Spearman(metrics, truths);
  } catch (const UndefinedCorrelation&) {
  }
  try {
    c.kendall = KendallTauB(metrics, truths);
  } catch (const UndefinedCorrelation&) {
  }
  return c;
}

}  // namespace best
