#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsym/rmatrix.hpp"
#include "qsym/symbol.hpp"

namespace qsym {

/// Phase space of Lax symbols.
///  T basis: L = sum_{i=m}^{n} t_i T^i (m finite).
///  D basis: L = sum_{i>=0} u_i D^(n-i), with lowest order m (nullopt: infinite).
struct PhaseWindow {
  Basis basis = Basis::T;
  int n = 1;
  std::optional<int> m;

  static PhaseWindow T(int n, int m) { return {Basis::T, n, m}; }
  static PhaseWindow D(int n, std::optional<int> m = std::nullopt) { return {Basis::D, n, m}; }

  /// Field letter: t (T basis) or u (D basis).
  char field() const { return basis == Basis::T ? 't' : 'u'; }
  /// Operator order carried by field index i.
  int order_of(int i) const { return basis == Basis::T ? i : n - i; }
  /// Field index carried by operator order r.
  int index_of(int r) const { return basis == Basis::T ? r : n - r; }
  bool has_index(int i) const;
  /// Field indices of a finite window, in increasing order.
  std::vector<int> indices() const;
  /// Lax symbol with formal coordinates, truncated at `floor` when infinite.
  Symbol formal_lax(int floor = Symbol::kExact) const;
  std::string str() const;

  friend bool operator==(const PhaseWindow&, const PhaseWindow&) = default;
};

/// Gradient one-form X with components x_j.
///  T basis: X = sum_j T^-j x_j.   D basis: X = sum_j D^(j-n-1) T x_j.
/// Tr L X reproduces int sum t_i x_i (T) and (q-1)/q int_{-1} sum u_i x_i (D).
struct OneForm {
  PhaseWindow window;
  std::map<int, LaurentField> x;

  static OneForm single(const PhaseWindow& w, int j, const LaurentField& xj);
  /// All components formal: x_j -> the coordinate x_j.
  static OneForm formal(const PhaseWindow& w);
  Symbol to_symbol(int floor = Symbol::kExact) const;
};

/// The three Poisson maps J^(s)_L(X) built from R and its adjoint:
///  J1 = [L, R X] + R*[L, X]
///  J2 = [L, R(LX + XL)] + L R*[L, X] + R*[L, X] L
///  J3 = [L, R(LXL)] + L R*[L, X] L
Symbol jmap(int s, Splitting sigma, const Symbol& L, const Symbol& X);
/// jmap with the window checked (WindowNotInvariant) and X built from the
/// one-form, truncated at `floor` in the D basis.
Symbol jmap(int s, Splitting sigma, const Symbol& L, const OneForm& X, int floor = -8);

/// Throws WindowNotInvariant when J^(s) does not map the window into itself.
void check_window(int s, Splitting sigma, const PhaseWindow& w);

/// {f_X, f_Y}_s(L) = <J^(s)_L(X), Y>.
QScalar bracket(int s, Splitting sigma, const Symbol& L, const Symbol& X, const Symbol& Y);

/// One term of a difference operator acting on a placeholder x:
///   c * left * P( T^a D^b (right * x) ),  P the identity or a mode projector.
struct KernelTerm {
  QScalar c{1};
  LaurentField left{1};
  int a = 0;
  int b = 0;
  LaurentField right{1};
  Proj proj = Proj::None;

  std::string str() const;
};

/// Fundamental bracket kernel J_ij, held as its action on the placeholder x
/// (a field linear in x); terms are a canonical rendering of that action.
class BracketKernel {
 public:
  BracketKernel() = default;
  BracketKernel(Basis basis, int i, int j, LaurentField action);

  /// The placeholder the action is linear in.
  static LaurentField placeholder(int shift = 0) { return LaurentField::var('x', 0, shift); }

  Basis basis() const { return basis_; }
  int i() const { return i_; }
  int j() const { return j_; }
  const LaurentField& action() const { return action_; }
  bool is_zero() const { return action_.is_zero(); }
  /// Terms ordered by descending a, then descending b.
  std::vector<KernelTerm> terms() const;
  /// Applies the operator to a field.
  LaurentField apply(const LaurentField& f) const;
  /// Substitutes formal coordinates named `name`.
  BracketKernel substitute(char name, const std::function<LaurentField(int)>& values) const;

  /// Operator form, e.g. "t2*T^1 - tau^-1(t2)*T^-1".
  std::string str() const;
  /// {f_i(z), f_j(w)} = -(J_ij(z) delta(z/w)) written out; terms with a
  /// projector are kept in operator form.
  std::string delta_str() const;

  friend bool operator==(const BracketKernel& a, const BracketKernel& b) {
    return a.basis_ == b.basis_ && a.action_ == b.action_;
  }

 private:
  Basis basis_ = Basis::T;
  int i_ = 0;
  int j_ = 0;
  LaurentField action_;
};

BracketKernel operator*(const QScalar& s, const BracketKernel& k);

/// Formal adjoint of a kernel: int f (K g) = int (K* f) g in the T basis,
/// int_{-1} in the D basis. Indices are swapped.
BracketKernel adjoint(const BracketKernel& k);

/// J_ij extracted from jmap applied to the one-form with the single component
/// x_j = x, read at the order of field i.
BracketKernel kernel(int s, Splitting sigma, const PhaseWindow& w, int i, int j);

/// The printed closed-form kernels, transcribed. Throws IndexOutOfFormula
/// outside the index ranges the formulas cover.
BracketKernel kernel_closed_form(int s, Splitting sigma, const PhaseWindow& w, int i, int j);

/// Name of the printed formula used by kernel_closed_form for these arguments.
std::string closed_form_name(int s, Splitting sigma, const PhaseWindow& w, int i, int j);

/// The global constant kappa with closed = kappa * computed on every pair,
/// chosen from {1/4, 1/2, 1, 2, 4}; nullopt if none fits.
std::optional<QScalar> fit_kappa(const std::vector<std::pair<BracketKernel, BracketKernel>>& pairs);

/// A closed-form entry that disagrees with the map-derived kernel.
struct Erratum {
  std::string formula;
  int i = 0;
  int j = 0;
  std::string printed;
  std::string derived;
  /// The constant c with printed = c * derived when one exists ("-1"), else empty.
  std::string ratio;
};

/// Compares kernel_closed_form with kernel on the given index pairs. The
/// comparison is exact when kappa is 1, else up to the fitted global constant.
struct ClosedFormReport {
  std::optional<QScalar> kappa;
  int compared = 0;
  int skipped = 0;
  std::vector<Erratum> errata;
};
ClosedFormReport compare_closed_forms(int s, Splitting sigma, const PhaseWindow& w,
                                      const std::vector<std::pair<int, int>>& entries,
                                      bool fit_constant);

/// Mode-diagonal operator: sum_a c_a z^e tau^a, acting on z^k by
/// (sum_a c_a q^(ak)) z^(k+e). Inverted mode by mode.
class ModeOperator {
 public:
  /// Throws NotInDomain if the concrete kernel is not of this shape,
  /// NotSecondClass if it vanishes.
  explicit ModeOperator(const BracketKernel& k);
  LaurentField apply(const LaurentField& f) const;
  /// Throws SingularMode if f has a mode the operator annihilates.
  LaurentField apply_inverse(const LaurentField& f) const;
  QScalar factor(int k) const;
  int zshift() const { return e_; }
  /// e.g. "z^1*(q*T^1 - q^-1*T^-1)"
  std::string str() const;

 private:
  std::map<int, QScalar> c_;
  int e_ = 0;
};

/// Dirac-reduced kernel J_ij - J_in J_nn^-1 J_nj, non-local through the
/// mode-wise inverse of J_nn.
struct ReducedKernel {
  BracketKernel local;
  BracketKernel constraint;
  BracketKernel left;
  BracketKernel right;
  std::optional<ModeOperator> inverse;

  LaurentField apply(const LaurentField& f) const;
  std::string str() const;
};

/// Dirac reduction at constrained index n of a kernel matrix whose entries
/// are concrete after `values` is substituted for the field coordinates
/// (constrained field included). Entries (i, j) with i, j != n are reduced.
/// A J_nn that vanishes identically throws NotSecondClass.
std::map<std::pair<int, int>, ReducedKernel> dirac_reduce(
    const std::map<std::pair<int, int>, BracketKernel>& kernels, int n, char field,
    const std::function<LaurentField(int)>& values);

/// Cyclic Jacobi sum of the linear functionals f_a(L) = <L, X_a> at a
/// concrete point L: sum_cyc {f_a, {f_b, f_c}}. Throws SupportEscapesWindow
/// when a Hamiltonian vector leaves the window or the mode range [-M, M].
QScalar jacobi_residual(int s, Splitting sigma, const PhaseWindow& w, int mode_cutoff,
                        const Symbol& L, const std::vector<OneForm>& forms);

/// Both sides of the pencil relations: for s = 2,
///   J2(L + eps) vs J2(L) + 2 eps J1(L);  for s = 3,
///   J3(L + eps) vs J3(L) + eps J2(L) + eps^2 J1(L).
std::pair<Symbol, Symbol> pencil_check(int s, Splitting sigma, const Symbol& L, const Symbol& X,
                                       const QScalar& eps);

}  // namespace qsym
