#pragma once

#include <random>

#include "qsym/symbol.hpp"

namespace qsym::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(20240607);
  return gen;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

/// Small random polynomial in q (possibly over a small denominator).
inline QScalar random_scalar(bool allow_fraction = true) {
  std::vector<mpz_class> num;
  const int deg = uniform(0, 2);
  for (int i = 0; i <= deg; ++i) num.emplace_back(uniform(-3, 3));
  QScalar s(IntPoly(num), IntPoly(1));
  if (allow_fraction && uniform(0, 3) == 0) s /= QScalar(IntPoly({uniform(1, 2), 1}), IntPoly(1));
  return s;
}

inline QScalar random_nonzero_scalar() {
  for (;;) {
    QScalar s = random_scalar();
    if (!s.is_zero()) return s;
  }
}

inline LaurentField random_field(int lo = -2, int hi = 2, int terms = 3) {
  LaurentField f;
  for (int t = 0; t < terms; ++t) f += LaurentField::monomial(random_scalar(), uniform(lo, hi));
  return f;
}

/// Random symbol with orders in [lo, hi] and the given floor.
inline Symbol random_symbol(Basis b, int lo, int hi, int floor, int zlo = -2, int zhi = 2) {
  Symbol s(b, floor);
  for (int i = std::max(lo, floor); i <= hi; ++i) s.set(i, random_field(zlo, zhi, 2));
  return s;
}

/// Monic T-basis symbol T^n + lower terms down to the floor.
inline Symbol random_monic(int n, int floor) {
  Symbol s = random_symbol(Basis::T, floor, n - 1, floor);
  s.set(n, LaurentField(1));
  return s;
}

}  // namespace qsym::testing
