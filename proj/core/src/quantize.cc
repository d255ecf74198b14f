#include "best/quantize.h"

#include <cmath>
#include <string>

#include "best/dataset.h"
#include "best/error.h"

namespace best {

QuantizationLevel::QuantizationLevel(std::int64_t q) : q_(q) {
  if (q < 2) {
    throw InvalidInput("quantization level must be >= 2, got " +
                       std::to_string(q));
  }
  if (q > static_cast<std::int64_t>(UINT32_MAX)) {
    throw InvalidInput("quantization level " + std::to_string(q) +
                       " exceeds the 32-bit digit range");
  }
}

BinKey::BinKey(std::int64_t level, std::vector<std::uint32_t> digits)
    : level_(level), digits_(std::move(digits)) {
  if (level_ < 2) throw InvalidInput("bin level must be >= 2");
  if (digits_.empty()) throw InvalidInput("bin key needs m - 1 >= 1 digits");
  for (const std::uint32_t d : digits_) {
    if (d >= static_cast<std::uint64_t>(level_)) {
      throw InvalidInput("bin digit " + std::to_string(d) +
                         " outside [0, q-1]");
    }
  }
}

std::size_t BinKeyHash::operator()(const BinKey& key) const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(
                                                key.level());
  for (const std::uint32_t d : key.digits()) {
    h ^= d + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::uint32_t QuantizeCoordinate(double p, std::int64_t q) {
  const double qd = static_cast<double>(q);
  double d = std::floor(p * qd);
  // The rounded product can land on the wrong side of an integer; fma gives
  // the exact sign of p*q - d.
  if (std::fma(p, qd, -d) < 0.0) {
    d -= 1.0;
  } else if (std::fma(p, qd, -(d + 1.0)) >= 0.0) {
    d += 1.0;
  }
  if (d < 0.0) d = 0.0;
  if (d >= qd) d = qd - 1.0;
  return static_cast<std::uint32_t>(d);
}

BinKey Quantize(std::span<const double> probs, QuantizationLevel q) {
  if (probs.size() < 2) {
    throw InvalidInput("softmax vector needs at least 2 entries");
  }
  std::vector<std::uint32_t> digits;
  digits.reserve(probs.size() - 1);
  for (std::size_t j = 1; j < probs.size(); ++j) {
    const double p = probs[j];
    if (!(p >= 0.0)) throw InvalidInput("negative or NaN softmax entry");
    digits.push_back(QuantizeCoordinate(p, q.value()));
  }
  return BinKey(q.value(), std::move(digits));
}

BinKey Quantize(const SoftmaxVector& probs, QuantizationLevel q) {
  return Quantize(probs.probs(), q);
}

std::uint64_t FlatIndex(const BinKey& key) {
  const auto q = static_cast<std::uint64_t>(key.level());
  std::uint64_t cells = 1;
  for (std::size_t j = 0; j < key.digits().size(); ++j) {
    if (__builtin_mul_overflow(cells, q, &cells)) {
      throw IndexNotRepresentable(
          "q^(m-1) does not fit in 64 bits; use the digit key directly");
    }
  }
  std::uint64_t index = 0;
  std::uint64_t stride = 1;
  for (const std::uint32_t d : key.digits()) {
    index += d * stride;
    stride *= q;
  }
  // index <= cells - 1 so the +1 cannot overflow.
  return index + 1;
}

}  // namespace best
