#include "qsym/sampling.hpp"

#include <algorithm>

namespace qsym {

Sampler::Sampler(const std::string& name) {
  std::seed_seq seq(name.begin(), name.end());
  gen_.seed(seq);
}

int Sampler::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

QScalar Sampler::scalar(bool allow_fraction) {
  std::vector<mpz_class> num;
  const int deg = uniform(0, 2);
  for (int i = 0; i <= deg; ++i) num.emplace_back(uniform(-3, 3));
  QScalar s(IntPoly(num), IntPoly(1));
  if (allow_fraction && uniform(0, 3) == 0) s /= QScalar(IntPoly({uniform(1, 2), 1}), IntPoly(1));
  return s;
}

QScalar Sampler::nonzero_scalar() {
  for (;;) {
    QScalar s = scalar();
    if (!s.is_zero()) return s;
  }
}

LaurentField Sampler::field(int lo, int hi, int terms) {
  LaurentField f;
  for (int t = 0; t < terms; ++t) f += LaurentField::monomial(scalar(), uniform(lo, hi));
  return f;
}

Symbol Sampler::symbol(Basis b, int lo, int hi, int floor, int zlo, int zhi) {
  Symbol s(b, floor);
  for (int i = std::max(lo, floor); i <= hi; ++i) s.set(i, field(zlo, zhi));
  return s;
}

}  // namespace qsym
