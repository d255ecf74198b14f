#ifndef BEST_RNG_H_
#define BEST_RNG_H_

#include <cstdint>
#include <random>

namespace best {

// Mixes a master seed with a stream index (splitmix64 finalizer). Used to
// give every trial, iteration and source its own independent stream.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

// Thin wrapper over mt19937_64. The standard engines produce identical
// sequences everywhere but std::*_distribution do not, so the draws we
// need are implemented here on top of raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t UniformIndex(std::uint64_t bound);

  // Exponential(1) draw.
  double Exponential();

 private:
  std::mt19937_64 engine_;
};

}  // namespace best

#endif  // BEST_RNG_H_
