#ifndef BEST_DENSITY_H_
#define BEST_DENSITY_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "best/rng.h"

namespace best {

// A probability density on [0, 1] with a finite supremum and a closed-form
// CDF, so that the mass of any quantization cell is an exact difference of
// CDF values rather than a quadrature.
//
// Two families:
//   * uniform mixture: sum_i w_i * Uniform[lo_i, hi_i)
//   * truncated polynomial: pdf(x) proportional to sum_k c_k x^k with
//     c_k >= 0, optionally mirrored to x -> 1 - x.
class BoundedDensity {
 public:
  struct Interval {
    double lo;
    double hi;
    double weight;
  };

  static BoundedDensity Uniform(double lo = 0.0, double hi = 1.0);
  static BoundedDensity UniformMixture(std::vector<Interval> parts);
  static BoundedDensity Polynomial(std::vector<double> coefficients,
                                   bool mirrored = false);

  // Text form used on the command line:
  //   uniform | uniform:LO:HI | mixture:LO:HI:W,LO:HI:W,...
  //   poly:C0:C1:... | poly-mirrored:C0:C1:...
  static BoundedDensity Parse(const std::string& spec);
  std::string ToString() const;

  double Pdf(double x) const;
  double Cdf(double x) const;
  // sup_x pdf(x), in closed form.
  double Bound() const;
  // Mass of [i/q, (i+1)/q).
  double CellMass(std::int64_t cell, std::int64_t q) const;
  double Sample(Rng& rng) const;

 private:
  struct Mixture {
    std::vector<Interval> parts;  // weights normalized to 1
  };
  struct Poly {
    std::vector<double> coefficients;  // normalized pdf coefficients
    std::vector<double> weights;       // mass of each x^k term
    bool mirrored;
  };

  explicit BoundedDensity(std::variant<Mixture, Poly> impl)
      : impl_(std::move(impl)) {}

  std::variant<Mixture, Poly> impl_;
};

}  // namespace best

#endif  // BEST_DENSITY_H_
