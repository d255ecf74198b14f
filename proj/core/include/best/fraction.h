#ifndef BEST_FRACTION_H_
#define BEST_FRACTION_H_

#include <compare>
#include <cstdint>
#include <numeric>

#include "best/error.h"

namespace best {

// Intermediate width for exact products of two int64 values.
__extension__ using Int128 = __int128;

// Non-negative-denominator rational over int64. Accuracies are sums of
// integer counts over integer totals, so keeping them exact makes tie
// detection and cross-level comparisons free of rounding.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den) { Assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  Fraction& operator+=(const Fraction& o) {
    const std::int64_t g = std::gcd(den_, o.den_);
    const Int128 lhs = static_cast<Int128>(num_) * (o.den_ / g);
    const Int128 rhs = static_cast<Int128>(o.num_) * (den_ / g);
    const Int128 den = static_cast<Int128>(den_ / g) * o.den_;
    AssignWide(lhs + rhs, den);
    return *this;
  }
  friend Fraction operator+(Fraction a, const Fraction& b) { return a += b; }

  Fraction& operator*=(const Fraction& o) {
    AssignWide(static_cast<Int128>(num_) * o.num_,
               static_cast<Int128>(den_) * o.den_);
    return *this;
  }
  friend Fraction operator*(Fraction a, const Fraction& b) { return a *= b; }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Fraction& a,
                                          const Fraction& b) {
    const Int128 l = static_cast<Int128>(a.num_) * b.den_;
    const Int128 r = static_cast<Int128>(b.num_) * a.den_;
    return l <=> r;
  }

 private:
  void Assign(std::int64_t num, std::int64_t den) {
    AssignWide(num, den);
  }

  void AssignWide(Int128 num, Int128 den) {
    if (den == 0) throw Error("fraction with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Int128 a = num < 0 ? -num : num;
    Int128 b = den;
    while (b != 0) {
      const Int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr Int128 kMax = INT64_MAX;
    if (num > kMax || num < -kMax || den > kMax) {
      throw Error("exact accuracy does not fit in 64-bit rational");
    }
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace best

#endif  // BEST_FRACTION_H_
