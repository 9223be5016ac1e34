#pragma once

#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "qsym/field.hpp"

namespace qsym {

/// Operator basis of a symbol: the shift T (T f = tau(f) T) or the q-derivative D.
enum class Basis { T, D };

const char* to_string(Basis b);

/// One of the three decompositions of the symbol algebra into subalgebras:
///  -1: orders >= 0 | <= -1;  +1: orders >= 1 | <= 0;
///   0: orders >= 1 plus the Taylor part of order 0 | orders <= -1 plus the
///      Laurent part of order 0.
struct Splitting {
  int sigma = -1;
  friend bool operator==(const Splitting&, const Splitting&) = default;
};

enum class Side { Plus, Minus };

/// Truncated formal series sum_i a_i(z) B^i in basis B, exact on orders >= floor.
/// Orders below the floor are unknown; equality only looks at the common
/// reliable window. The floor kExact marks a symbol with no truncation.
class Symbol {
 public:
  static constexpr int kExact = INT_MIN / 4;

  explicit Symbol(Basis basis = Basis::T, int floor = kExact) : basis_(basis), floor_(floor) {}

  /// c(z) B^order.
  static Symbol monomial(Basis basis, const LaurentField& c, int order, int floor = kExact);
  static Symbol identity(Basis basis) { return monomial(basis, LaurentField(1), 0); }
  /// Function symbol f (order 0).
  static Symbol function(Basis basis, const LaurentField& f, int floor = kExact) {
    return monomial(basis, f, 0, floor);
  }

  Basis basis() const { return basis_; }
  int floor() const { return floor_; }
  bool exact() const { return floor_ <= kExact / 2; }
  const std::map<int, LaurentField>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  std::optional<int> top() const;
  /// Highest order that may be nonzero, counting unknown orders below the floor.
  int effective_top() const;

  /// Coefficient at order i; throws FloorTooHigh when i is below the floor.
  LaurentField coeff(int order) const;
  /// Coefficient at order i without the floor check (zero if absent).
  LaurentField raw_coeff(int order) const;
  void set(int order, const LaurentField& f);
  void add(int order, const LaurentField& f);

  /// Drops coefficients below the new floor (never lowers the floor).
  Symbol truncated(int floor) const;
  /// Same coefficients with a lower-or-equal floor claim; only valid when the
  /// caller knows the dropped orders are genuinely zero.
  Symbol with_floor(int floor) const;

  Symbol operator-() const;
  Symbol& operator+=(const Symbol& o);
  Symbol& operator-=(const Symbol& o);
  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
  Symbol& operator*=(const QScalar& s);
  friend Symbol operator*(Symbol a, const QScalar& s) { return a *= s; }
  friend Symbol operator*(const QScalar& s, Symbol a) { return a *= s; }

  /// Orders in [lo, hi] only (no floor check).
  Symbol slice(int lo, int hi) const;

  Symbol map_coeffs(const std::function<LaurentField(const LaurentField&)>& fn) const;

  /// Exact equality on the common reliable window.
  bool equals_on_window(const Symbol& o) const;

  std::string str() const;

 private:
  Basis basis_;
  int floor_;
  std::map<int, LaurentField> c_;
};

/// Floor of a product under the truncation rule.
int product_floor(const Symbol& a, const Symbol& b);

/// Product; orders below min_floor are not computed.
Symbol mul(const Symbol& a, const Symbol& b, int min_floor = Symbol::kExact);
/// Product through the symbol-calculus formula (D basis only); an independent route for mul.
Symbol mul_symbolcalc(const Symbol& a, const Symbol& b);
Symbol commutator(const Symbol& a, const Symbol& b);

/// Left multiplication by a function (exact).
Symbol left_mul(const LaurentField& f, const Symbol& a);

LaurentField res_T(const Symbol& a);
LaurentField res_D(const Symbol& a);
QScalar trace(const Symbol& a);
QScalar pairing(const Symbol& a, const Symbol& b);
/// The pairing computed through the D-basis residue formula, whatever the input basis.
QScalar pairing_via_D(const Symbol& a, const Symbol& b);
/// z(q-1)/q res_D(A).
LaurentField omega(const Symbol& a);
/// The order-0 T-basis coefficient of a D-basis symbol: z(q-1)/q res_D(A T^-1).
LaurentField t0_from_D(const Symbol& a);

/// T^-1 written in the D basis, truncated at the floor.
Symbol tinv_in_D(int floor);
/// T written in the D basis.
Symbol t_in_D();
/// D written in the T basis.
Symbol d_in_T();
/// D^-1 written in the T basis, truncated at the floor.
Symbol dinv_in_T(int floor);

Symbol convert(const Symbol& a, Basis target, int floor);

Symbol project(const Symbol& a, Side side, Splitting s);

/// Operator adjoint. T basis: pairing int f g (tau* = tau^-1). D basis:
/// pairing int_{-1} f g (tau* = q^-1 tau^-1, D* = -D tau^-1). The stored
/// coefficients are taken as an exact finite operator; `floor` bounds the
/// D-basis series.
Symbol adjoint(const Symbol& a, int floor = Symbol::kExact);

Symbol power(const Symbol& a, int p);
Symbol nth_root(const Symbol& a, int n);
Symbol invert(const Symbol& a, std::optional<int> floor = std::nullopt);

/// Coefficient-wise evaluation at q = r.
Symbol eval_at_q(const Symbol& a, const mpq_class& r);
Symbol limit_q1(const Symbol& a);

}  // namespace qsym
