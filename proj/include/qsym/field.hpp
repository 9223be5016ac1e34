#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qsym/scalar.hpp"

namespace qsym {

/// Mode projector on fields: Taylor part (z^k, k >= 1), Laurent part
/// (k <= -1) or the constant mode.
enum class Proj : std::int8_t { None = 0, Plus = 1, Minus = -1, Zero = 2 };

struct ProjAtom;

/// A formal field coordinate such as t_2(q^a z) or (z d/dz) u_1, optionally
/// seen through a mode projector. The projector, shift and Euler operator all
/// commute, so the tuple is a normal form.
///
/// A coordinate may instead be an opaque projected monomial p(z^k M) (`atom`
/// set, name '@'), which arises when a projector meets a composite formal
/// expression.
///
/// Formal projections are kept canonical: p- E is stored as E - p+ E - p0 E,
/// and p0 E is stored with its first coordinate unshifted (p0 tau = p0).
struct FieldVar {
  char name = 't';
  int index = 0;
  int shift = 0;
  int euler = 0;
  Proj proj = Proj::None;
  std::shared_ptr<const ProjAtom> atom;

  friend std::strong_ordering operator<=>(const FieldVar& a, const FieldVar& b);
  friend bool operator==(const FieldVar& a, const FieldVar& b) { return (a <=> b) == 0; }
  std::string str() const;
};

struct VarPower {
  FieldVar var;
  int exponent = 1;
  friend std::strong_ordering operator<=>(const VarPower& a, const VarPower& b) {
    if (auto c = a.var <=> b.var; c != 0) return c;
    return a.exponent <=> b.exponent;
  }
  friend bool operator==(const VarPower& a, const VarPower& b) { return (a <=> b) == 0; }
};

/// Sorted product of field coordinates; empty for the constant monomial.
using VarMono = std::vector<VarPower>;

/// p(z^zexp * mono) for a nonempty monomial; never reducible further.
struct ProjAtom {
  Proj proj = Proj::Plus;
  int zexp = 0;
  VarMono mono;
};

/// Projector a coordinate is seen through (None for a plain coordinate).
Proj projector_of(const FieldVar& v);
/// The projected expression of a projected coordinate (the coordinate itself otherwise).
class LaurentField;
LaurentField content_of(const FieldVar& v);

/// Laurent polynomial in z with Q(q) coefficients; no stored zeros.
using ZPoly = std::map<int, QScalar>;

/// Element of the function ring: a Laurent polynomial in z over Q(q),
/// polynomial in finitely many formal field coordinates. A value with no
/// formal coordinates is a plain Laurent polynomial ("concrete").
class LaurentField {
 public:
  LaurentField() = default;
  LaurentField(const QScalar& c);  // NOLINT(google-explicit-constructor)
  LaurentField(long c);  // NOLINT(google-explicit-constructor)

  static LaurentField monomial(const QScalar& c, int zexp);
  static LaurentField z(int zexp = 1) { return monomial(QScalar(1), zexp); }
  static LaurentField var(char name, int index, int shift = 0);
  static LaurentField var(const FieldVar& v);
  static LaurentField from_zpoly(const ZPoly& p);

  bool is_zero() const { return terms_.empty(); }
  bool is_concrete() const;
  /// Plain Laurent polynomial part (requires is_concrete() for a faithful view).
  ZPoly zpoly() const;
  QScalar coeff(int zexp) const;
  const std::map<VarMono, ZPoly>& terms() const { return terms_; }
  /// Lowest and highest z exponents present (concrete part and formal parts together).
  int min_zexp() const;
  int max_zexp() const;

  LaurentField operator-() const;
  LaurentField& operator+=(const LaurentField& o);
  LaurentField& operator-=(const LaurentField& o);
  LaurentField& operator*=(const QScalar& s);
  friend LaurentField operator+(LaurentField a, const LaurentField& b) { return a += b; }
  friend LaurentField operator-(LaurentField a, const LaurentField& b) { return a -= b; }
  friend LaurentField operator*(const LaurentField& a, const LaurentField& b);
  friend LaurentField operator*(LaurentField a, const QScalar& s) { return a *= s; }
  friend LaurentField operator*(const QScalar& s, LaurentField a) { return a *= s; }

  /// Multiplication by z^k.
  LaurentField times_z(int k) const;

  friend bool operator==(const LaurentField& a, const LaurentField& b) = default;
  friend auto operator<=>(const LaurentField& a, const LaurentField& b) = default;

  /// Applies fn to every coefficient, dropping zeros.
  LaurentField map_coeffs(const std::function<QScalar(const QScalar&)>& fn) const;

  /// Substitutes every formal coordinate named `name` with index i by values(i).
  LaurentField substitute(char name, const std::function<LaurentField(int)>& values) const;
  /// True if some coordinate with this name occurs.
  bool contains(char name) const;
  /// Decomposition of a field linear in the coordinates named `name`:
  /// maps each occurring coordinate (index, shift, euler, proj) to its cofactor.
  /// Throws if a term is not linear in them.
  std::map<FieldVar, LaurentField> linear_in(char name) const;

  std::string str() const;

 private:
  void add_term(const VarMono& m, int zexp, const QScalar& c);
  std::map<VarMono, ZPoly> terms_;
};

/// tau^beta: f(z) -> f(q^beta z).
LaurentField shift(const LaurentField& f, int beta);
/// q-derivative (f(qz) - f(z)) / (z (q - 1)).
LaurentField qderive(const LaurentField& f);
/// Iterated q-derivative.
LaurentField qderive(const LaurentField& f, int times);
/// z d/dz.
LaurentField euler_derive(const LaurentField& f);
/// Coefficient of z^0. Throws NotInDomain for fields with formal coordinates.
QScalar integrate(const LaurentField& f);
/// integrate(z f): coefficient of z^-1.
QScalar integrate_m1(const LaurentField& f);
/// Exponents >= 1.
LaurentField taylor_part(const LaurentField& f);
/// Exponents <= -1.
LaurentField laurent_part(const LaurentField& f);
/// The z^0 mode.
LaurentField constant_part(const LaurentField& f);
LaurentField project(const LaurentField& f, Proj p);

/// Inverse of a concrete monomial c z^k; throws NotInvertibleLeading otherwise.
LaurentField invert_monomial(const LaurentField& f);

}  // namespace qsym
