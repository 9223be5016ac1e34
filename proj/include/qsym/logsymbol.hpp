#pragma once

#include <map>
#include <string>

#include "qsym/poisson.hpp"

namespace qsym {

/// Polynomial in the formal transcendental lambda = log q over Q(q).
class LogScalar {
 public:
  LogScalar() = default;
  LogScalar(const QScalar& c);  // NOLINT(google-explicit-constructor)
  static LogScalar lambda() { return monomial(QScalar(1), 1); }
  static LogScalar monomial(const QScalar& c, int power);

  QScalar coeff(int power) const;
  const std::map<int, QScalar>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  LogScalar& operator+=(const LogScalar& o);
  LogScalar& operator-=(const LogScalar& o);
  friend LogScalar operator+(LogScalar a, const LogScalar& b) { return a += b; }
  friend LogScalar operator-(LogScalar a, const LogScalar& b) { return a -= b; }
  friend LogScalar operator*(const LogScalar& a, const LogScalar& b);
  friend bool operator==(const LogScalar&, const LogScalar&) = default;

  /// e.g. "(q-1)*logq + 2"; lambda prints as logq.
  std::string str() const;
  /// Joint limit lambda -> 0, lambda/(q-1) -> 1, q -> 1: sum_k c_k(q) (q-1)^k at q = 1.
  /// Throws PoleAtQ when a term has no finite limit.
  mpq_class classical_limit() const;

 private:
  std::map<int, QScalar> c_;
};

/// D-basis symbol whose coefficients are polynomials in lambda, held as
/// sum_k lambda^k S_k with one truncation floor shared by all parts.
class LambdaSymbol {
 public:
  explicit LambdaSymbol(int floor = Symbol::kExact) : floor_(floor) {}
  explicit LambdaSymbol(const Symbol& s, int power = 0);

  int floor() const { return floor_; }
  const std::map<int, Symbol>& parts() const { return parts_; }
  /// S_k (zero when absent).
  Symbol part(int power) const;
  bool is_zero() const { return parts_.empty(); }
  /// Drops orders below the new floor.
  LambdaSymbol truncated(int floor) const;

  LambdaSymbol operator-() const;
  LambdaSymbol& operator+=(const LambdaSymbol& o);
  LambdaSymbol& operator-=(const LambdaSymbol& o);
  friend LambdaSymbol operator+(LambdaSymbol a, const LambdaSymbol& b) { return a += b; }
  friend LambdaSymbol operator-(LambdaSymbol a, const LambdaSymbol& b) { return a -= b; }
  friend LambdaSymbol operator*(const LogScalar& c, const LambdaSymbol& a);
  /// Applies a Q(q)-linear map to every part.
  LambdaSymbol map_parts(const std::function<Symbol(const Symbol&)>& fn) const;

  /// Equality of every lambda-part on the common reliable window.
  bool equals_on_window(const LambdaSymbol& o) const;
  std::string str() const;

 private:
  void normalize();
  int floor_;
  std::map<int, Symbol> parts_;
};

/// Product, orders below min_floor not computed.
LambdaSymbol mul(const LambdaSymbol& a, const LambdaSymbol& b, int min_floor = Symbol::kExact);

/// c log D_q + body, with body a lambda-free D-basis symbol.
struct LogSymbol {
  QScalar c;
  Symbol body{Basis::D};
  std::string str() const;
};

/// Coefficient of tau^-k(D_q^k f) D_q^(p-k) in [log D_q, f D_q^p]:
/// lambda for k = 0 (with the Euler derivative), else
/// (lambda/(q-1)) (-1)^(k-1) q^(-k(k-1)/2) / (k)_q.
LogScalar log_coefficient(int k);
/// The printed coefficient, without 1/(k)_q; kept for the errata report.
LogScalar log_coefficient_printed(int k);

/// [log D_q, f D_q^p] down to order `floor`.
LambdaSymbol log_commutator(const LaurentField& f, int p, int floor);
/// [log D_q, A] for a D-basis symbol, down to max(floor, A's floor).
LambdaSymbol log_commutator(const Symbol& a, int floor);
LambdaSymbol log_commutator(const LambdaSymbol& a, int floor);
/// [c log D_q + body, A].
LambdaSymbol commutator(const LogSymbol& l, const Symbol& a, int floor);

/// [c log D_q + L0, X_{>=0}]_{<=-1} + Omega([c log D_q + L0, X]), with Omega the
/// order-0 T-basis extraction.
LambdaSymbol winfty_map(const QScalar& c, const Symbol& L0, const Symbol& X, int floor);
LambdaSymbol winfty_map(const QScalar& c, const Symbol& L0, const OneForm& X, int floor);

/// lambda-polynomial pairing <A, Y>.
LogScalar pairing(const LambdaSymbol& a, const Symbol& y);

/// First-order alpha expansion of the normalized quadratic structure at
/// L = beta D_q^alpha + L0 D_q^alpha with alpha beta = c.
struct ScalingLimitReport {
  /// beta-coefficient at alpha = 0; must vanish for the limit to exist.
  LambdaSymbol quadratic_at_zero;
  /// c Q'(0) + linear terms at alpha = 0.
  LambdaSymbol limit;
  LambdaSymbol expected;
  bool finite = false;
  bool matches = false;
};
ScalingLimitReport scaling_limit_check(const QScalar& c, const Symbol& L0, const Symbol& X, int floor);

}  // namespace qsym
