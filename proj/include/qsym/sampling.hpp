#pragma once

#include <random>
#include <string>

#include "qsym/symbol.hpp"

namespace qsym {

/// Seeded generator of small random scalars, fields and symbols.
class Sampler {
 public:
  explicit Sampler(std::uint32_t seed) : gen_(seed) {}
  /// Seeded from a name, so every named check draws the same values.
  explicit Sampler(const std::string& name);

  int uniform(int lo, int hi);
  /// Integer polynomial in q of degree <= 2, sometimes over (q + c).
  QScalar scalar(bool allow_fraction = true);
  QScalar nonzero_scalar();
  /// Sum of `terms` random monomials with z-exponents in [lo, hi].
  LaurentField field(int lo = -2, int hi = 2, int terms = 2);
  /// Orders in [lo, hi], coefficients with z-exponents in [zlo, zhi]; the
  /// floor is kept (kExact for an exact symbol).
  Symbol symbol(Basis b, int lo, int hi, int floor = Symbol::kExact, int zlo = -2, int zhi = 2);

 private:
  std::mt19937 gen_;
};

}  // namespace qsym
