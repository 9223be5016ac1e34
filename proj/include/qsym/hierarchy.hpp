#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsym/poisson.hpp"

namespace qsym {

/// A Lax flow dL/dt_p = [L, (L^p)_+]. Fractional p needs a monic T-basis L
/// whose order is a multiple of the denominator.
struct LaxFlowSpec {
  Splitting sigma{-1};
  PhaseWindow window;
  mpq_class power{1};
};

/// C_p(L) = (1/p) Tr L^p.
QScalar casimir(const Symbol& L, int p);
/// dC_p(L) = L^(p-1).
Symbol casimir_gradient(const Symbol& L, int p);

/// L^p for a positive rational p (fractional through the monic root).
Symbol lax_power(const Symbol& L, const mpq_class& p);

/// [L, (L^p)_+], checked against [(L^p)_-, L] on the reliable window.
Symbol lax_rhs(const LaxFlowSpec& spec, const Symbol& L);

/// The Lax vector [L, R(L^p)] and the Hamiltonian vectors of the chain.
struct TriHamiltonianReport {
  Symbol lax;
  Symbol j1;  // J1(dC_{p+1})
  Symbol j2;  // J2(dC_p)
  std::optional<Symbol> j3;  // J3(dC_{p-1}), when requested
  bool j1_is_lax = false;
  bool j2_is_j1 = false;
  bool j2_is_twice_j1 = false;
  std::optional<bool> j3_is_j1;
};
TriHamiltonianReport tri_hamiltonian_check(Splitting sigma, const Symbol& L, int p, bool with_j3 = false);

/// Coefficients of the flow at the constrained orders: the top order of a
/// monic L and order 0 of a T window with m = 0 (the top order u0 in the D basis).
struct ConstraintReport {
  std::vector<std::pair<int, LaurentField>> constrained;
  bool stable = true;
  std::string str() const;
};
ConstraintReport constraint_stability(const LaxFlowSpec& spec, const Symbol& L);

}  // namespace qsym
