#ifndef BEST_THEOREM_SIM_H_
#define BEST_THEOREM_SIM_H_

#include <cstdint>
#include <string>
#include <vector>

#include "best/density.h"

namespace best {

// Level beyond which a binary-source, binary-target policy trained on n
// samples per class has |E[A_val] - 1/2| > epsilon with probability at most
// delta, when both class-conditional densities of p_2 are bounded by B:
//
//   B / (1 - (1 - epsilon * delta / (4B))^(1/n))
//
// Throws DomainError unless epsilon, delta, B > 0, n >= 1 and
// epsilon * delta <= 4B.
double QBound(double epsilon, double delta, double bound, std::int64_t n);

enum class ValMode { kAnalytic, kSampled };

std::string ToString(ValMode mode);
ValMode ParseValMode(const std::string& name);

struct SimulationOptions {
  ValMode val_mode = ValMode::kAnalytic;
  // Validation draws per class in sampled mode.
  std::int64_t val_per_class = 1000;
  unsigned jobs = 1;
};

struct TrialStats {
  double mean = 0.0;
  double stderr_mean = 0.0;
  double mean_train = 0.0;
  std::vector<double> per_trial;  // E[A_val] of each training draw
};

// For each trial, draws n training samples per class from f1 (label 1) and
// f2 (label 2), derives the optimal policy at level q and computes its
// expected validation accuracy, exactly from cell masses (analytic) or on
// fresh validation draws (sampled). Trial t uses stream DeriveSeed(seed, t)
// regardless of q, so sweeps over q reuse the same training draws.
TrialStats ExpectedValAccuracy(const BoundedDensity& f1,
                               const BoundedDensity& f2, std::int64_t n,
                               std::int64_t q, int trials, std::uint64_t seed,
                               const SimulationOptions& options = {});

struct TheoremRunConfig {
  std::int64_t n = 100;
  std::vector<std::int64_t> q_schedule;
  int trials = 50;
  double epsilon = 0.1;
  double delta = 0.5;
  std::uint64_t seed = 0;
  SimulationOptions options;

  void Validate(double bound) const;
};

struct SweepRow {
  std::int64_t q = 0;
  double mean_val_acc = 0.0;
  double stderr_mean = 0.0;
  double mean_train_acc = 0.0;
  double bound_q = 0.0;
  bool satisfied = false;  // q > bound_q
  // Share of trials with |E[A_val] - 1/2| > epsilon.
  double violation_fraction = 0.0;
};

std::vector<SweepRow> ConvergenceSweep(const TheoremRunConfig& cfg,
                                       const BoundedDensity& f1,
                                       const BoundedDensity& f2);

}  // namespace best

#endif  // BEST_THEOREM_SIM_H_
