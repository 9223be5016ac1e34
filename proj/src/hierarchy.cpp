#include "qsym/hierarchy.hpp"

#include <sstream>

#include "qsym/errors.hpp"

namespace qsym {

QScalar casimir(const Symbol& L, int p) {
  if (p < 1) throw DomainError(ErrorKind::NotInDomain, "Casimir index must be positive");
  return trace(power(L, p)) / QScalar(p);
}

Symbol casimir_gradient(const Symbol& L, int p) {
  if (p < 1) throw DomainError(ErrorKind::NotInDomain, "Casimir index must be positive");
  return power(L, p - 1);
}

Symbol lax_power(const Symbol& L, const mpq_class& p) {
  if (p <= 0) throw DomainError(ErrorKind::NotInDomain, "flow power must be positive");
  if (p.get_den() == 1) return power(L, static_cast<int>(p.get_num().get_si()));
  const auto top = L.top();
  const bool monic = top && L.basis() == Basis::T && L.coeffs().rbegin()->second == LaurentField(1);
  if (!monic) throw DomainError(ErrorKind::NotMonic, "fractional powers need a monic T-basis operator");
  const int n = *top;
  const mpq_class steps = p * n;
  if (n < 1 || steps.get_den() != 1)
    throw DomainError(ErrorKind::NotMonic, "the order of L is not a multiple of the power's denominator");
  return power(nth_root(L, n), static_cast<int>(steps.get_num().get_si()));
}

Symbol lax_rhs(const LaxFlowSpec& spec, const Symbol& L) {
  const Symbol Lp = lax_power(L, spec.power);
  const Symbol plus = commutator(L, project(Lp, Side::Plus, spec.sigma));
  const Symbol minus = commutator(project(Lp, Side::Minus, spec.sigma), L);
  if (!plus.equals_on_window(minus))
    throw std::logic_error("the two forms of the Lax equation disagree");
  for (const auto& [r, c] : plus.coeffs()) {
    if (r < plus.floor() || c.is_zero()) continue;
    if (r > spec.window.n || (spec.window.m && r < *spec.window.m))
      throw DomainError(ErrorKind::WindowNotInvariant, "the flow leaves the window " + spec.window.str());
  }
  return plus;
}

TriHamiltonianReport tri_hamiltonian_check(Splitting sigma, const Symbol& L, int p, bool with_j3) {
  if (p < 1) throw DomainError(ErrorKind::NotInDomain, "flow power must be positive");
  TriHamiltonianReport r;
  r.lax = commutator(L, r_apply(sigma, power(L, p)));
  r.j1 = jmap(1, sigma, L, casimir_gradient(L, p + 1));
  r.j2 = jmap(2, sigma, L, casimir_gradient(L, p));
  r.j1_is_lax = r.j1.equals_on_window(r.lax);
  r.j2_is_j1 = r.j2.equals_on_window(r.j1);
  r.j2_is_twice_j1 = r.j2.equals_on_window(r.j1 * QScalar(2));
  if (with_j3) {
    if (p < 2) throw DomainError(ErrorKind::NotInDomain, "J3(dC_{p-1}) needs p >= 2");
    r.j3 = jmap(3, sigma, L, casimir_gradient(L, p - 1));
    r.j3_is_j1 = r.j3->equals_on_window(r.j1);
  }
  return r;
}

ConstraintReport constraint_stability(const LaxFlowSpec& spec, const Symbol& L) {
  const Symbol rhs = lax_rhs(spec, L);
  const PhaseWindow& w = spec.window;
  std::vector<int> orders;
  const auto top = L.top();
  if (w.basis == Basis::D) {
    orders.push_back(w.n);
  } else {
    if (top && *top == w.n && L.coeffs().rbegin()->second == LaurentField(1)) orders.push_back(w.n);
    if (w.m && *w.m == 0 && w.n != 0) orders.push_back(0);
  }
  ConstraintReport report;
  for (int r : orders) {
    if (!rhs.exact() && r < rhs.floor())
      throw DomainError(ErrorKind::FloorTooHigh, "the flow is not resolved at order " + std::to_string(r));
    const LaurentField c = rhs.raw_coeff(r);
    report.constrained.emplace_back(r, c);
    if (!c.is_zero()) report.stable = false;
  }
  return report;
}

std::string ConstraintReport::str() const {
  std::ostringstream out;
  for (const auto& [r, c] : constrained) out << "order " << r << ": " << c.str() << "\n";
  out << (stable ? "stable" : "not stable");
  return out.str();
}

}  // namespace qsym
