#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsym {

/// Dense univariate polynomial in q with arbitrary-precision integer
/// coefficients, stored in ascending powers. Never carries trailing zeros.
class IntPoly {
 public:
  IntPoly() = default;
  IntPoly(long c);  // NOLINT(google-explicit-constructor)
  IntPoly(const mpz_class& c);  // NOLINT(google-explicit-constructor)
  explicit IntPoly(std::vector<mpz_class> coeffs);

  static IntPoly monomial(const mpz_class& c, int power);

  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  /// Lowest power with a nonzero coefficient (0 for the zero polynomial).
  int valuation() const;
  const mpz_class& lead() const { return c_.back(); }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(int power) const;

  IntPoly operator-() const;
  IntPoly& operator+=(const IntPoly& o);
  IntPoly& operator-=(const IntPoly& o);
  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);

  IntPoly scaled(const mpz_class& s) const;
  /// Multiply by q^k (k >= 0) or divide by q^-k (k < 0, requires divisibility).
  IntPoly shifted(int k) const;
  /// Divides every coefficient exactly by s.
  IntPoly divexact(const mpz_class& s) const;
  /// Exact division by a polynomial known to divide this one.
  IntPoly divexact(const IntPoly& d) const;

  mpz_class content() const;
  IntPoly primitive_part() const;
  /// Pseudo-remainder of this by d.
  IntPoly prem(const IntPoly& d) const;

  mpq_class eval(const mpq_class& r) const;

  friend bool operator==(const IntPoly& a, const IntPoly& b) = default;
  /// Deterministic total order (degree, then coefficients from the top).
  friend std::strong_ordering operator<=>(const IntPoly& a, const IntPoly& b);

  /// Descending-power text such as "q^2-1".
  std::string str() const;

 private:
  void trim();
  std::vector<mpz_class> c_;
};

/// gcd in Z[q], normalized with positive leading coefficient.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// Element of Q(q): canonical reduced fraction of integer polynomials.
/// The numerator and denominator are coprime (including integer content) and
/// the denominator has a positive leading coefficient.
class QScalar {
 public:
  QScalar() : num_(), den_(1) {}
  QScalar(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  QScalar(const mpz_class& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  QScalar(const mpq_class& c);  // NOLINT(google-explicit-constructor)
  QScalar(IntPoly num, IntPoly den);

  static QScalar q() { return QScalar(IntPoly::monomial(1, 1), IntPoly(1)); }
  /// q^k for any integer k.
  static QScalar qpow(long k);

  const IntPoly& num() const { return num_; }
  const IntPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  /// True when the value is a plain rational number (no q dependence).
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
  mpq_class as_rational() const;

  QScalar operator-() const;
  QScalar& operator+=(const QScalar& o);
  QScalar& operator-=(const QScalar& o);
  QScalar& operator*=(const QScalar& o);
  QScalar& operator/=(const QScalar& o);
  friend QScalar operator+(QScalar a, const QScalar& b) { return a += b; }
  friend QScalar operator-(QScalar a, const QScalar& b) { return a -= b; }
  friend QScalar operator*(QScalar a, const QScalar& b) { return a *= b; }
  friend QScalar operator/(QScalar a, const QScalar& b) { return a /= b; }

  QScalar inverse() const;
  QScalar pow(long e) const;

  /// The substitution q -> q^k (k may be negative).
  QScalar substitute_qpow(int k) const;

  friend bool operator==(const QScalar& a, const QScalar& b) = default;
  friend std::strong_ordering operator<=>(const QScalar& a, const QScalar& b);

  std::string str() const;

 private:
  void canonicalize();
  IntPoly num_;
  IntPoly den_;
};

std::ostream& operator<<(std::ostream& os, const QScalar& s);

/// q-number (q^n - 1)/(q - 1), any integer n.
QScalar qnum(long n);
/// Falling q-factorial (m)_q (m-1)_q ... (m-k+1)_q.
QScalar qfalling(long m, long k);
/// q-factorial (1)_q (2)_q ... (k)_q.
QScalar qfactorial(long k);
/// q-binomial [m k]_q from the defining product quotient.
QScalar qbinomial(long m, long k);

/// Exact value at q = r; throws DomainError(PoleAtQ) if the denominator vanishes.
mpq_class eval_q(const QScalar& s, const mpq_class& r);

namespace detail {
/// Fault injection for the verification harness: when enabled, qbinomial
/// returns a wrong value for k >= 2.
void set_qbinomial_fault(bool enabled);
}  // namespace detail

}  // namespace qsym
