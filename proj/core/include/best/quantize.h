#ifndef BEST_QUANTIZE_H_
#define BEST_QUANTIZE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace best {

class SoftmaxVector;

// Number of bins per softmax coordinate. Always >= 2.
class QuantizationLevel {
 public:
  explicit QuantizationLevel(std::int64_t q);
  std::int64_t value() const { return q_; }
  friend bool operator==(QuantizationLevel, QuantizationLevel) = default;

 private:
  std::int64_t q_;
};

// Identity of one cell of the quantized simplex: the per-coordinate bin
// digits of p_2..p_m at a given level. Never flattened internally, so any
// (q, m) combination is representable.
class BinKey {
 public:
  BinKey(std::int64_t level, std::vector<std::uint32_t> digits);

  std::int64_t level() const { return level_; }
  int source_classes() const { return static_cast<int>(digits_.size()) + 1; }
  std::span<const std::uint32_t> digits() const { return digits_; }

  friend bool operator==(const BinKey&, const BinKey&) = default;
  friend auto operator<=>(const BinKey&, const BinKey&) = default;

 private:
  std::int64_t level_;
  std::vector<std::uint32_t> digits_;
};

struct BinKeyHash {
  std::size_t operator()(const BinKey& key) const;
};

// floor(p * q) computed exactly for the real product, clamped to q - 1 for
// p = 1. Exactness keeps refined grids nested: the digit at level q always
// equals floor(digit at level k*q / k).
std::uint32_t QuantizeCoordinate(double p, std::int64_t q);

// Maps an m-class softmax vector to its cell at level q. Only p_2..p_m are
// used since p_1 is implied by the others.
BinKey Quantize(std::span<const double> probs, QuantizationLevel q);
BinKey Quantize(const SoftmaxVector& probs, QuantizationLevel q);

// 1-based flattened index sum_j digit_j * q^(j-2) + 1, for display only.
// Throws IndexNotRepresentable when q^(m-1) exceeds 64 bits.
std::uint64_t FlatIndex(const BinKey& key);

}  // namespace best

#endif  // BEST_QUANTIZE_H_
