#pragma once

#include <functional>

#include "qsym/symbol.hpp"

namespace qsym {

/// R = (P+ - P-)/2 for the splitting.
Symbol r_apply(Splitting s, const Symbol& a);
/// Adjoint of R under the trace pairing. For sigma = -1, +1 this is -R of the
/// opposite splitting; for sigma = 0, R is skew (R* = -R).
Symbol rstar_apply(Splitting s, const Symbol& a);

/// Linear endomorphism of the symbol algebra used as a candidate r-matrix.
struct LinearMap {
  enum class Tag { R, Rstar, Rantisym, Custom };
  Tag tag = Tag::R;
  Splitting splitting;
  std::function<Symbol(const Symbol&)> custom;

  static LinearMap r(Splitting s) { return {Tag::R, s, {}}; }
  static LinearMap rstar(Splitting s) { return {Tag::Rstar, s, {}}; }
  /// (R - R*)/2.
  static LinearMap rantisym(Splitting s) { return {Tag::Rantisym, s, {}}; }
  static LinearMap of(std::function<Symbol(const Symbol&)> fn) {
    return {Tag::Custom, Splitting{}, std::move(fn)};
  }

  Symbol operator()(const Symbol& a) const;
};

/// [a, b]_R = [R a, b] + [a, R b].
Symbol modified_bracket(const LinearMap& r, const Symbol& a, const Symbol& b);
/// [a, b]_R through the projector formula [a+, b+] - [a-, b-].
Symbol modified_bracket_projected(Splitting s, const Symbol& a, const Symbol& b);

/// [R a, R b] - R([a, b]_R) + alpha [a, b]; zero when R solves the modified
/// Yang-Baxter equation at level alpha.
Symbol myb_residual(const LinearMap& r, const QScalar& alpha, const Symbol& a, const Symbol& b);

/// The automorphism sum f_i(q) T^i -> sum f_i(1/q) T^-i of the T-basis
/// algebra; it exchanges the sigma = -1 and sigma = +1 splittings.
Symbol reflect(const Symbol& a);

}  // namespace qsym
