#ifndef BEST_SYNTH_H_
#define BEST_SYNTH_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "best/dataset.h"
#include "best/ranking.h"

namespace best {

// Layout of the class-exclusive blocks along p_2. Class y owns
// [b_(y-1), b_y) with b_y = (y + shift) / n for 0 < y < n. kAligned uses
// shift 0, so a coarse grid already separates the classes; kOffset uses
// shift 0.2, which only finer grids resolve, giving the validation
// accuracy curve an interior peak.
enum class Geometry { kAligned, kOffset };

std::string ToString(Geometry g);
Geometry ParseGeometry(const std::string& name);

// Shape of the class-y density inside its own block. kFlat is uniform, so
// the mixture density jumps at block edges; kSmooth is a Beta(2, 2) bump
// that vanishes at the edges, so the mixture density is continuous. The
// Bayes accuracy is the same for both.
enum class Profile { kFlat, kSmooth };

std::string ToString(Profile p);
Profile ParseProfile(const std::string& name);

// A synthetic source: each target sample of class y gets p_2 = t, where t
// is drawn from class y's block with probability 1 - overlap and from
// Uniform[0, 1] otherwise. The remaining mass 1 - t is spread over the
// other m - 1 coordinates by a class-independent uniform simplex draw, so
// it carries no label information.
struct SynthSpec {
  int m = 2;
  int n = 2;
  std::int64_t per_class = 250;
  double overlap = 0.5;
  Geometry geometry = Geometry::kOffset;
  Profile profile = Profile::kSmooth;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Balanced dataset with labels interleaved 1, 2, ..., n, 1, 2, ... so that
// every source generated with the same (n, per_class) lists the same
// target labels row for row.
LabeledDataset Generate(const SynthSpec& spec);

// Bayes accuracy of the spec's class conditionals: 1 - overlap (n-1)/n.
double BayesAccuracy(const SynthSpec& spec);

struct SplitDatasets {
  LabeledDataset train;
  LabeledDataset val;
};

// Per class, the last round(val_frac * count) rows (at least one, at most
// count - 1) go to validation; order is preserved.
SplitDatasets SplitByRows(const LabeledDataset& data, double val_frac);

// `count` specs sharing `base` except for overlap, which runs linearly from
// overlap_min to overlap_max, and seed, derived from master_seed.
std::vector<SynthSpec> OverlapFamily(const SynthSpec& base, int count,
                                     double overlap_min, double overlap_max,
                                     std::uint64_t master_seed);

struct FamilyMember {
  std::string source_id;
  SynthSpec spec;
  SplitDatasets data;
};

struct SynthFamily {
  std::vector<FamilyMember> members;
  GroundTruth truth;  // Bayes accuracy per source_id
};

// Requires at least 3 specs, all with the same n and per_class. Source ids
// are "src000", "src001", ...
SynthFamily GenerateFamily(std::span<const SynthSpec> specs, double val_frac);

}  // namespace best

#endif  // BEST_SYNTH_H_
