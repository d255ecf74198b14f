#include "best/theorem_sim.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "best/error.h"
#include "best/parallel.h"
#include "best/policy.h"
#include "best/rng.h"

namespace best {
namespace {

LabeledDataset DrawBinary(const BoundedDensity& f1, const BoundedDensity& f2,
                          std::int64_t per_class, Rng& rng) {
  LabeledDataset data(2, 2);
  for (std::int64_t i = 0; i < per_class; ++i) {
    const double x1 = f1.Sample(rng);
    data.Add(std::array<double, 2>{1.0 - x1, x1}, 1);
    const double x2 = f2.Sample(rng);
    data.Add(std::array<double, 2>{1.0 - x2, x2}, 2);
  }
  return data;
}

// E[A_val] over the true distribution for a fixed policy. Seen cells add
// their exact masses; every unseen cell is a two-way tie, so together they
// add a quarter of the remaining mass of both classes.
double AnalyticValAccuracy(const Policy& policy, const BoundedDensity& f1,
                           const BoundedDensity& f2) {
  const std::int64_t q = policy.level();
  std::vector<std::pair<std::uint32_t, const Decision*>> cells;
  cells.reserve(policy.decisions().size());
  for (const auto& [key, d] : policy.decisions()) {
    cells.emplace_back(key.digits()[0], &d);
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double acc = 0.0;
  double seen = 0.0;
  for (const auto& [cell, d] : cells) {
    const double p1 = f1.CellMass(cell, q);
    const double p2 = f2.CellMass(cell, q);
    seen += p1 + p2;
    if (d->is_tie()) {
      acc += 0.25 * (p1 + p2);
    } else {
      acc += 0.5 * (d->classes()[0] == 1 ? p1 : p2);
    }
  }
  return acc + 0.25 * (2.0 - seen);
}

}  // namespace

double QBound(double epsilon, double delta, double bound, std::int64_t n) {
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw DomainError("epsilon and delta must be > 0");
  }
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw DomainError("density bound B must be finite and > 0");
  }
  if (n < 1) throw DomainError("n must be >= 1");
  const double x = epsilon * delta / (4.0 * bound);
  if (x > 1.0) {
    throw DomainError("epsilon * delta must not exceed 4B");
  }
  // 1 - (1 - x)^(1/n), without cancellation for small x.
  const double gap = -std::expm1(std::log1p(-x) / static_cast<double>(n));
  return bound / gap;
}

std::string ToString(ValMode mode) {
  return mode == ValMode::kAnalytic ? "analytic" : "sampled";
}

ValMode ParseValMode(const std::string& name) {
  if (name == "analytic") return ValMode::kAnalytic;
  if (name == "sampled") return ValMode::kSampled;
  throw InvalidInput("unknown validation mode '" + name + "'");
}

TrialStats ExpectedValAccuracy(const BoundedDensity& f1,
                               const BoundedDensity& f2, std::int64_t n,
                               std::int64_t q, int trials, std::uint64_t seed,
                               const SimulationOptions& options) {
  if (trials < 1) throw InvalidInput("trials must be >= 1");
  if (n < 1) throw InvalidInput("n must be >= 1");
  const QuantizationLevel level(q);
  TrialStats stats;
  stats.per_trial.assign(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> train(static_cast<std::size_t>(trials), 0.0);
  ParallelFor(static_cast<std::size_t>(trials), options.jobs,
              [&](std::size_t t) {
                Rng rng(DeriveSeed(seed, t));
                const LabeledDataset data = DrawBinary(f1, f2, n, rng);
                const ConditionalCounts counts = BuildCounts(data, level);
                const Policy policy = DerivePolicy(counts);
                train[t] = TrainAccuracy(counts, policy).value();
                if (options.val_mode == ValMode::kAnalytic) {
                  stats.per_trial[t] = AnalyticValAccuracy(policy, f1, f2);
                } else {
                  const LabeledDataset val =
                      DrawBinary(f1, f2, options.val_per_class, rng);
                  stats.per_trial[t] =
                      ValAccuracy(val, policy, level).value();
                }
              });
  double sum = 0.0;
  double train_sum = 0.0;
  for (std::size_t t = 0; t < stats.per_trial.size(); ++t) {
    sum += stats.per_trial[t];
    train_sum += train[t];
  }
  stats.mean = sum / trials;
  stats.mean_train = train_sum / trials;
  if (trials > 1) {
    double ss = 0.0;
    for (const double v : stats.per_trial) {
      ss += (v - stats.mean) * (v - stats.mean);
    }
    stats.stderr_mean = std::sqrt(ss / (trials - 1) / trials);
  }
  return stats;
}

void TheoremRunConfig::Validate(double bound) const {
  if (n < 1) throw InvalidInput("n must be >= 1");
  if (trials < 1) throw InvalidInput("trials must be >= 1");
  if (q_schedule.empty()) throw InvalidInput("q schedule is empty");
  for (std::size_t i = 0; i < q_schedule.size(); ++i) {
    if (q_schedule[i] < 2) throw InvalidInput("q schedule entries must be >= 2");
    if (i > 0 && q_schedule[i] <= q_schedule[i - 1]) {
      throw InvalidInput("q schedule must be strictly increasing");
    }
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0) || !(delta > 0.0 && delta <= 1.0)) {
    throw InvalidInput("epsilon and delta must be in (0, 1]");
  }
  if (epsilon * delta > 4.0 * bound) {
    throw DomainError("epsilon * delta must not exceed 4B");
  }
}

std::vector<SweepRow> ConvergenceSweep(const TheoremRunConfig& cfg,
                                       const BoundedDensity& f1,
                                       const BoundedDensity& f2) {
  const double bound = std::max(f1.Bound(), f2.Bound());
  cfg.Validate(bound);
  const double bound_q = QBound(cfg.epsilon, cfg.delta, bound, cfg.n);
  std::vector<SweepRow> rows;
  rows.reserve(cfg.q_schedule.size());
  for (const std::int64_t q : cfg.q_schedule) {
    const TrialStats s =
        ExpectedValAccuracy(f1, f2, cfg.n, q, cfg.trials, cfg.seed,
                            cfg.options);
    SweepRow row;
    row.q = q;
    row.mean_val_acc = s.mean;
    row.stderr_mean = s.stderr_mean;
    row.mean_train_acc = s.mean_train;
    row.bound_q = bound_q;
    row.satisfied = static_cast<double>(q) > bound_q;
    const auto violations = std::count_if(
        s.per_trial.begin(), s.per_trial.end(),
        [&](double v) { return std::abs(v - 0.5) > cfg.epsilon; });
    row.violation_fraction =
        static_cast<double>(violations) / static_cast<double>(cfg.trials);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace best
