#include "best/density.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "best/error.h"

namespace best {
namespace {

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double ParseNumber(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("bad number '" + s + "' in density spec");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw InvalidInput("bad number '" + s + "' in density spec");
  }
  return v;
}

std::size_t PickWeighted(const std::vector<double>& weights, Rng& rng) {
  double u = rng.Uniform01();
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    if (u < weights[i]) return i;
    u -= weights[i];
    last = i;
  }
  // Rounding left a sliver of u; it belongs to the last real component.
  return last;
}

std::string Num(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

BoundedDensity BoundedDensity::Uniform(double lo, double hi) {
  return UniformMixture({{lo, hi, 1.0}});
}

BoundedDensity BoundedDensity::UniformMixture(std::vector<Interval> parts) {
  if (parts.empty()) throw InvalidInput("uniform mixture needs a component");
  double total = 0.0;
  for (const Interval& p : parts) {
    if (!(p.lo >= 0.0 && p.hi <= 1.0 && p.lo < p.hi)) {
      throw InvalidInput("mixture interval must satisfy 0 <= lo < hi <= 1");
    }
    if (!(p.weight > 0.0)) throw InvalidInput("mixture weight must be > 0");
    total += p.weight;
  }
  for (Interval& p : parts) p.weight /= total;
  return BoundedDensity(Mixture{std::move(parts)});
}

BoundedDensity BoundedDensity::Polynomial(std::vector<double> coefficients,
                                          bool mirrored) {
  if (coefficients.empty()) {
    throw InvalidInput("polynomial density needs coefficients");
  }
  double z = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    if (!(coefficients[k] >= 0.0)) {
      throw InvalidInput("polynomial coefficients must be >= 0");
    }
    z += coefficients[k] / static_cast<double>(k + 1);
  }
  if (!(z > 0.0)) throw InvalidInput("polynomial density has zero mass");
  std::vector<double> weights(coefficients.size());
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    coefficients[k] /= z;
    weights[k] = coefficients[k] / static_cast<double>(k + 1);
  }
  return BoundedDensity(
      Poly{std::move(coefficients), std::move(weights), mirrored});
}

BoundedDensity BoundedDensity::Parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "uniform") {
    if (rest.empty()) return Uniform();
    const auto f = Split(rest, ':');
    if (f.size() != 2) throw InvalidInput("uniform takes LO:HI");
    return Uniform(ParseNumber(f[0]), ParseNumber(f[1]));
  }
  if (kind == "mixture") {
    std::vector<Interval> parts;
    for (const std::string& item : Split(rest, ',')) {
      const auto f = Split(item, ':');
      if (f.size() != 3) throw InvalidInput("mixture parts are LO:HI:W");
      parts.push_back(
          {ParseNumber(f[0]), ParseNumber(f[1]), ParseNumber(f[2])});
    }
    return UniformMixture(std::move(parts));
  }
  if (kind == "poly" || kind == "poly-mirrored") {
    std::vector<double> c;
    for (const std::string& item : Split(rest, ':')) {
      c.push_back(ParseNumber(item));
    }
    return Polynomial(std::move(c), kind == "poly-mirrored");
  }
  throw InvalidInput("unknown density kind '" + kind + "'");
}

std::string BoundedDensity::ToString() const {
  if (const auto* m = std::get_if<Mixture>(&impl_)) {
    std::string s = "mixture:";
    for (std::size_t i = 0; i < m->parts.size(); ++i) {
      if (i > 0) s += ',';
      s += Num(m->parts[i].lo) + ":" + Num(m->parts[i].hi) + ":" +
           Num(m->parts[i].weight);
    }
    return s;
  }
  const auto& p = std::get<Poly>(impl_);
  std::string s = p.mirrored ? "poly-mirrored" : "poly";
  for (const double c : p.coefficients) s += ":" + Num(c);
  return s;
}

double BoundedDensity::Pdf(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (const auto* m = std::get_if<Mixture>(&impl_)) {
    double v = 0.0;
    for (const Interval& p : m->parts) {
      // Closed at 1 so the last cell keeps its mass.
      if (x >= p.lo && (x < p.hi || (x == 1.0 && p.hi == 1.0))) {
        v += p.weight / (p.hi - p.lo);
      }
    }
    return v;
  }
  const auto& p = std::get<Poly>(impl_);
  const double t = p.mirrored ? 1.0 - x : x;
  double v = 0.0;
  for (std::size_t k = p.coefficients.size(); k-- > 0;) {
    v = v * t + p.coefficients[k];
  }
  return v;
}

double BoundedDensity::Cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (const auto* m = std::get_if<Mixture>(&impl_)) {
    double v = 0.0;
    for (const Interval& p : m->parts) {
      v += p.weight * std::clamp((x - p.lo) / (p.hi - p.lo), 0.0, 1.0);
    }
    return v;
  }
  const auto& p = std::get<Poly>(impl_);
  const auto poly_cdf = [&](double t) {
    double v = 0.0;
    for (std::size_t k = 0; k < p.weights.size(); ++k) {
      v += p.weights[k] * std::pow(t, static_cast<double>(k + 1));
    }
    return v;
  };
  return p.mirrored ? 1.0 - poly_cdf(1.0 - x) : poly_cdf(x);
}

double BoundedDensity::Bound() const {
  if (const auto* m = std::get_if<Mixture>(&impl_)) {
    // Piecewise constant and right-continuous: the max is attained at some
    // interval start.
    double b = 0.0;
    for (const Interval& p : m->parts) b = std::max(b, Pdf(p.lo));
    return b;
  }
  const auto& p = std::get<Poly>(impl_);
  // Non-negative coefficients make the polynomial increasing in t, so the
  // sup sits at t = 1.
  double b = 0.0;
  for (const double c : p.coefficients) b += c;
  return b;
}

double BoundedDensity::CellMass(std::int64_t cell, std::int64_t q) const {
  const double qd = static_cast<double>(q);
  const double lo = static_cast<double>(cell) / qd;
  const double hi = cell + 1 == q ? 1.0 : static_cast<double>(cell + 1) / qd;
  return Cdf(hi) - Cdf(lo);
}

double BoundedDensity::Sample(Rng& rng) const {
  if (const auto* m = std::get_if<Mixture>(&impl_)) {
    std::vector<double> w;
    w.reserve(m->parts.size());
    for (const Interval& p : m->parts) w.push_back(p.weight);
    const Interval& part = m->parts[PickWeighted(w, rng)];
    return part.lo + (part.hi - part.lo) * rng.Uniform01();
  }
  const auto& p = std::get<Poly>(impl_);
  // Each x^k term is a Beta(k+1, 1) component with inverse CDF u^(1/(k+1)).
  const std::size_t k = PickWeighted(p.weights, rng);
  const double t =
      std::pow(1.0 - rng.Uniform01(), 1.0 / static_cast<double>(k + 1));
  return p.mirrored ? 1.0 - t : t;
}

}  // namespace best
