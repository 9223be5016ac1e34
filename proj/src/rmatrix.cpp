#include "qsym/rmatrix.hpp"

#include "qsym/errors.hpp"

namespace qsym {

namespace {

const QScalar kHalf = QScalar(mpq_class(1, 2));

}  // namespace

Symbol r_apply(Splitting s, const Symbol& a) {
  return kHalf * (project(a, Side::Plus, s) - project(a, Side::Minus, s));
}

Symbol rstar_apply(Splitting s, const Symbol& a) {
  if (s.sigma == 0) return -r_apply(s, a);
  return -r_apply(Splitting{-s.sigma}, a);
}

Symbol LinearMap::operator()(const Symbol& a) const {
  switch (tag) {
    case Tag::R:
      return r_apply(splitting, a);
    case Tag::Rstar:
      return rstar_apply(splitting, a);
    case Tag::Rantisym:
      return kHalf * (r_apply(splitting, a) - rstar_apply(splitting, a));
    case Tag::Custom:
      break;
  }
  return custom(a);
}

Symbol modified_bracket(const LinearMap& r, const Symbol& a, const Symbol& b) {
  return commutator(r(a), b) + commutator(a, r(b));
}

Symbol modified_bracket_projected(Splitting s, const Symbol& a, const Symbol& b) {
  return commutator(project(a, Side::Plus, s), project(b, Side::Plus, s)) -
         commutator(project(a, Side::Minus, s), project(b, Side::Minus, s));
}

Symbol myb_residual(const LinearMap& r, const QScalar& alpha, const Symbol& a, const Symbol& b) {
  return commutator(r(a), r(b)) - r(modified_bracket(r, a, b)) + alpha * commutator(a, b);
}

Symbol reflect(const Symbol& a) {
  if (a.basis() != Basis::T)
    throw DomainError(ErrorKind::BasisMismatch, "reflection is defined in the T basis");
  Symbol r(Basis::T);
  for (const auto& [i, f] : a.coeffs())
    r.set(-i, f.map_coeffs([](const QScalar& c) { return c.substitute_qpow(-1); }));
  return r;
}

}  // namespace qsym
