#include "best/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "best/error.h"
#include "best/rng.h"

namespace best {
namespace {

double Shift(Geometry g) { return g == Geometry::kAligned ? 0.0 : 0.2; }

double Boundary(int y, int n, Geometry g) {
  if (y <= 0) return 0.0;
  if (y >= n) return 1.0;
  return (y + Shift(g)) / n;
}

}  // namespace

std::string ToString(Geometry g) {
  return g == Geometry::kAligned ? "aligned" : "offset";
}

Geometry ParseGeometry(const std::string& name) {
  if (name == "aligned") return Geometry::kAligned;
  if (name == "offset") return Geometry::kOffset;
  throw InvalidInput("unknown geometry '" + name + "'");
}

std::string ToString(Profile p) {
  return p == Profile::kFlat ? "flat" : "smooth";
}

Profile ParseProfile(const std::string& name) {
  if (name == "flat") return Profile::kFlat;
  if (name == "smooth") return Profile::kSmooth;
  throw InvalidInput("unknown profile '" + name + "'");
}

void SynthSpec::Validate() const {
  if (m < 2) throw InvalidInput("synthetic m must be >= 2");
  if (n < 2) throw InvalidInput("synthetic n must be >= 2");
  if (per_class < 2) throw InvalidInput("synthetic per_class must be >= 2");
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw InvalidInput("overlap must be in [0, 1]");
  }
}

LabeledDataset Generate(const SynthSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  LabeledDataset data(spec.m, spec.n);
  std::vector<double> p(static_cast<std::size_t>(spec.m));
  std::vector<double> w(static_cast<std::size_t>(spec.m - 1));
  for (std::int64_t i = 0; i < spec.per_class; ++i) {
    for (int y = 1; y <= spec.n; ++y) {
      double t;
      if (rng.Uniform01() < spec.overlap) {
        t = rng.Uniform01();
      } else {
        const double lo = Boundary(y - 1, spec.n, spec.geometry);
        const double hi = Boundary(y, spec.n, spec.geometry);
        double u = rng.Uniform01();
        if (spec.profile == Profile::kSmooth) {
          // The median of three uniforms is Beta(2, 2).
          const double a = rng.Uniform01();
          const double b = rng.Uniform01();
          u = std::max(std::min(u, a), std::min(std::max(u, a), b));
        }
        t = lo + (hi - lo) * u;
      }
      p[1] = t;
      if (spec.m == 2) {
        p[0] = 1.0 - t;
      } else {
        // Uniform point on the (m-2)-simplex from normalized exponentials.
        double total = 0.0;
        for (double& e : w) total += (e = rng.Exponential());
        double rest = 0.0;
        for (std::size_t j = 2; j < p.size(); ++j) {
          p[j] = (1.0 - t) * (w[j - 1] / total);
          rest += p[j];
        }
        p[0] = std::max(0.0, (1.0 - t) - rest);
      }
      data.Add(p, y);
    }
  }
  return data;
}

double BayesAccuracy(const SynthSpec& spec) {
  spec.Validate();
  // Inside class y's block the class-y density is (1 - o) g(t) + o with
  // g >= 0 and every other class has density o, so the Bayes rule picks the
  // block owner; averaging over classes gives 1 - o + o/n.
  return 1.0 - spec.overlap * (spec.n - 1) / spec.n;
}

SplitDatasets SplitByRows(const LabeledDataset& data, double val_frac) {
  if (!(val_frac > 0.0 && val_frac < 1.0)) {
    throw InvalidInput("val_frac must be in (0, 1)");
  }
  const int n = data.target_classes();
  std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < data.size(); ++i) {
    rows[static_cast<std::size_t>(data.label(i) - 1)].push_back(i);
  }
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  for (const auto& r : rows) {
    if (r.size() < 2) {
      throw InvalidInput("each class needs >= 2 rows to split");
    }
    const auto val_count = std::clamp<std::size_t>(
        static_cast<std::size_t>(
            std::llround(val_frac * static_cast<double>(r.size()))),
        1, r.size() - 1);
    const std::size_t cut = r.size() - val_count;
    train_rows.insert(train_rows.end(), r.begin(),
                      r.begin() + static_cast<std::ptrdiff_t>(cut));
    val_rows.insert(val_rows.end(),
                    r.begin() + static_cast<std::ptrdiff_t>(cut), r.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());
  return {data.Subset(train_rows), data.Subset(val_rows)};
}

std::vector<SynthSpec> OverlapFamily(const SynthSpec& base, int count,
                                     double overlap_min, double overlap_max,
                                     std::uint64_t master_seed) {
  if (count < 1) throw InvalidInput("family size must be >= 1");
  std::vector<SynthSpec> specs;
  specs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SynthSpec s = base;
    s.overlap = count == 1 ? overlap_min
                           : overlap_min + (overlap_max - overlap_min) * i /
                                               (count - 1);
    s.seed = DeriveSeed(master_seed, static_cast<std::uint64_t>(i));
    specs.push_back(s);
  }
  return specs;
}

SynthFamily GenerateFamily(std::span<const SynthSpec> specs, double val_frac) {
  if (specs.size() < 3) throw InvalidInput("a family needs at least 3 specs");
  SynthFamily family;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].n != specs[0].n || specs[i].per_class != specs[0].per_class) {
      throw InvalidInput("family specs must share n and per_class");
    }
    char id[32];
    std::snprintf(id, sizeof(id), "src%03zu", i);
    FamilyMember member{id, specs[i],
                        SplitByRows(Generate(specs[i]), val_frac)};
    family.truth[member.source_id] = BayesAccuracy(specs[i]);
    family.members.push_back(std::move(member));
  }
  return family;
}

}  // namespace best
