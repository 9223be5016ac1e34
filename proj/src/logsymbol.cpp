#include "qsym/logsymbol.hpp"

#include <algorithm>

#include "qsym/errors.hpp"

namespace qsym {

// ---------------------------------------------------------------- LogScalar

LogScalar::LogScalar(const QScalar& c) {
  if (!c.is_zero()) c_[0] = c;
}

LogScalar LogScalar::monomial(const QScalar& c, int power) {
  LogScalar s;
  if (!c.is_zero()) s.c_[power] = c;
  return s;
}

QScalar LogScalar::coeff(int power) const {
  auto it = c_.find(power);
  return it == c_.end() ? QScalar(0) : it->second;
}

LogScalar& LogScalar::operator+=(const LogScalar& o) {
  for (const auto& [k, c] : o.c_) {
    QScalar v = coeff(k) + c;
    if (v.is_zero())
      c_.erase(k);
    else
      c_[k] = v;
  }
  return *this;
}

LogScalar& LogScalar::operator-=(const LogScalar& o) {
  for (const auto& [k, c] : o.c_) *this += monomial(-c, k);
  return *this;
}

LogScalar operator*(const LogScalar& a, const LogScalar& b) {
  LogScalar out;
  for (const auto& [i, x] : a.c_)
    for (const auto& [j, y] : b.c_) out += LogScalar::monomial(x * y, i + j);
  return out;
}

std::string LogScalar::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    const auto& [k, c] = *it;
    const std::string l = k == 1 ? "logq" : "logq^" + std::to_string(k);
    const std::string cs = c.str();
    std::string term;
    if (k == 0)
      term = cs;
    else if (cs == "1")
      term = l;
    else if (cs == "-1")
      term = "-" + l;
    else
      term = "(" + cs + ")*" + l;
    out += (out.empty() ? "" : " + ") + term;
  }
  return out;
}

mpq_class LogScalar::classical_limit() const {
  mpq_class out = 0;
  const QScalar qm1 = QScalar::q() - QScalar(1);
  for (const auto& [k, c] : c_) {
    QScalar v = c;
    for (int i = 0; i < k; ++i) v *= qm1;
    out += eval_q(v, 1);
  }
  return out;
}

// ---------------------------------------------------------------- LambdaSymbol

LambdaSymbol::LambdaSymbol(const Symbol& s, int power) : floor_(s.floor()) {
  if (s.basis() != Basis::D) throw DomainError(ErrorKind::BasisMismatch, "lambda symbols live in the D basis");
  parts_[power] = s;
  normalize();
}

void LambdaSymbol::normalize() {
  for (const auto& [k, s] : parts_) floor_ = std::max(floor_, s.floor());
  for (auto it = parts_.begin(); it != parts_.end();) {
    it->second = it->second.truncated(floor_);
    if (it->second.is_zero())
      it = parts_.erase(it);
    else
      ++it;
  }
}

Symbol LambdaSymbol::part(int power) const {
  auto it = parts_.find(power);
  return it == parts_.end() ? Symbol(Basis::D, floor_) : it->second;
}

LambdaSymbol LambdaSymbol::truncated(int floor) const {
  LambdaSymbol out(std::max(floor_, floor));
  out.parts_ = parts_;
  out.normalize();
  return out;
}

LambdaSymbol LambdaSymbol::operator-() const {
  LambdaSymbol out(floor_);
  for (const auto& [k, s] : parts_) out.parts_[k] = -s;
  return out;
}

LambdaSymbol& LambdaSymbol::operator+=(const LambdaSymbol& o) {
  floor_ = std::max(floor_, o.floor_);
  for (const auto& [k, s] : o.parts_) {
    auto it = parts_.find(k);
    if (it == parts_.end())
      parts_[k] = s;
    else
      it->second += s;
  }
  normalize();
  return *this;
}

LambdaSymbol& LambdaSymbol::operator-=(const LambdaSymbol& o) { return *this += -o; }

LambdaSymbol operator*(const LogScalar& c, const LambdaSymbol& a) {
  LambdaSymbol out(a.floor_);
  for (const auto& [i, x] : c.coeffs())
    for (const auto& [j, s] : a.parts_) out += LambdaSymbol(s * x, i + j);
  return out;
}

LambdaSymbol LambdaSymbol::map_parts(const std::function<Symbol(const Symbol&)>& fn) const {
  LambdaSymbol out(fn(Symbol(Basis::D, floor_)).floor());
  for (const auto& [k, s] : parts_) out += LambdaSymbol(fn(s), k);
  return out;
}

bool LambdaSymbol::equals_on_window(const LambdaSymbol& o) const { return (*this - o).is_zero(); }

std::string LambdaSymbol::str() const {
  if (parts_.empty()) return "0";
  std::string out;
  for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
    const auto& [k, s] = *it;
    std::string term;
    if (k == 0)
      term = s.str();
    else
      term = (k == 1 ? std::string("logq") : "logq^" + std::to_string(k)) + "*(" + s.str() + ")";
    out += (out.empty() ? "" : " + ") + term;
  }
  return out;
}

LambdaSymbol mul(const LambdaSymbol& a, const LambdaSymbol& b, int min_floor) {
  const Symbol za(Basis::D, a.floor());
  const Symbol zb(Basis::D, b.floor());
  LambdaSymbol out(mul(za, zb, min_floor).floor());
  for (const auto& [i, x] : a.parts())
    for (const auto& [j, y] : b.parts()) out += LambdaSymbol(mul(x, y, min_floor), i + j);
  // A zero factor still bounds the reliable window by the other factor's floor.
  for (const auto& [i, x] : a.parts()) out = out.truncated(mul(x, zb, min_floor).floor());
  for (const auto& [j, y] : b.parts()) out = out.truncated(mul(za, y, min_floor).floor());
  return out;
}

std::string LogSymbol::str() const {
  const std::string cs = c.str();
  std::string head = c.is_zero() ? "" : (cs == "1" ? "logD" : "(" + cs + ")*logD");
  if (body.is_zero()) return head.empty() ? "0" : head;
  return head.empty() ? body.str() : head + " + " + body.str();
}

// ---------------------------------------------------------------- log D_q

LogScalar log_coefficient(int k) {
  if (k < 0) throw DomainError(ErrorKind::NotInDomain, "log coefficients start at k = 0");
  if (k == 0) return LogScalar::lambda();
  QScalar c = QScalar::qpow(-static_cast<long>(k) * (k - 1) / 2) / ((QScalar::q() - QScalar(1)) * qnum(k));
  if (k % 2 == 0) c = -c;
  return LogScalar::monomial(c, 1);
}

LogScalar log_coefficient_printed(int k) {
  if (k < 0) throw DomainError(ErrorKind::NotInDomain, "log coefficients start at k = 0");
  if (k == 0) return LogScalar::lambda();
  const QScalar c = -qbinomial(-1, k) * QScalar::qpow(k) / (QScalar::q() - QScalar(1));
  return LogScalar::monomial(c, 1);
}

namespace {

int require_floor(int floor) {
  if (floor <= Symbol::kExact / 2)
    throw DomainError(ErrorKind::FloorTooHigh, "log commutators need a finite floor");
  return floor;
}

}  // namespace

LambdaSymbol log_commutator(const LaurentField& f, int p, int floor) {
  require_floor(floor);
  Symbol out(Basis::D, floor);
  if (p >= floor) out.add(p, euler_derive(f));
  LaurentField d = f;
  for (int k = 1; p - k >= floor; ++k) {
    d = qderive(d);
    if (d.is_zero()) break;
    out.add(p - k, shift(d, -k) * log_coefficient(k).coeff(1));
  }
  return LambdaSymbol(out, 1);
}

LambdaSymbol log_commutator(const Symbol& a, int floor) {
  if (a.basis() != Basis::D) throw DomainError(ErrorKind::BasisMismatch, "log D_q acts on D-basis symbols");
  const int f = require_floor(a.exact() ? floor : std::max(floor, a.floor()));
  LambdaSymbol out(f);
  for (const auto& [p, c] : a.coeffs())
    if (p >= f) out += log_commutator(c, p, f);
  return out;
}

LambdaSymbol log_commutator(const LambdaSymbol& a, int floor) {
  const int f = require_floor(std::max(floor, a.floor()));
  LambdaSymbol out(f);
  for (const auto& [k, s] : a.parts()) out += LogScalar::monomial(QScalar(1), k) * log_commutator(s, f);
  return out;
}

LambdaSymbol commutator(const LogSymbol& l, const Symbol& a, int floor) {
  LambdaSymbol out = LogScalar(l.c) * log_commutator(a, floor);
  out += LambdaSymbol(commutator(l.body, a));
  return out;
}

namespace {

LambdaSymbol omega_parts(const LambdaSymbol& a) {
  return a.map_parts([](const Symbol& s) { return Symbol::function(Basis::D, t0_from_D(s)); });
}

LambdaSymbol project_parts(const LambdaSymbol& a, Side side) {
  return a.map_parts([side](const Symbol& s) { return project(s, side, Splitting{-1}); });
}

}  // namespace

LambdaSymbol winfty_map(const QScalar& c, const Symbol& L0, const Symbol& X, int floor) {
  const LogSymbol L{c, L0};
  const Symbol xp = project(X, Side::Plus, Splitting{-1});
  return project_parts(commutator(L, xp, floor), Side::Minus) + omega_parts(commutator(L, X, floor));
}

LambdaSymbol winfty_map(const QScalar& c, const Symbol& L0, const OneForm& X, int floor) {
  if (X.window.basis != Basis::D || X.window.n != 0)
    throw DomainError(ErrorKind::NotInDomain, "the W_{1+inf} map takes D-basis one-forms with n = 0");
  return winfty_map(c, L0, X.to_symbol(floor), floor);
}

LogScalar pairing(const LambdaSymbol& a, const Symbol& y) {
  LogScalar out;
  for (const auto& [k, s] : a.parts()) out += LogScalar::monomial(pairing(s, y), k);
  return out;
}

// ---------------------------------------------------------------- scaling limit

namespace {

// (a0 + alpha a1) D^(k alpha), to first order in alpha.
struct Jet {
  int k = 0;
  LambdaSymbol a0;
  LambdaSymbol a1;
};

Jet jmul(const Jet& a, const Jet& b, int floor) {
  Jet out{a.k + b.k, mul(a.a0, b.a0, floor), mul(a.a1, b.a0, floor) + mul(a.a0, b.a1, floor)};
  if (a.k != 0) out.a1 += LogScalar(QScalar(a.k)) * mul(a.a0, log_commutator(b.a0, floor), floor);
  return out;
}

Jet jadd(const Jet& a, const Jet& b, const QScalar& s = QScalar(1)) {
  if (a.k != b.k) throw DomainError(ErrorKind::NotInDomain, "jets of different exponents");
  return {a.k, a.a0 + LogScalar(s) * b.a0, a.a1 + LogScalar(s) * b.a1};
}

Jet jscale(const Jet& a, const QScalar& s) { return {a.k, LogScalar(s) * a.a0, LogScalar(s) * a.a1}; }

Jet jlinear(const Jet& a, const std::function<LambdaSymbol(const LambdaSymbol&)>& fn) {
  if (a.k != 0) throw DomainError(ErrorKind::NotInDomain, "projections act on exponent-0 jets");
  return {0, fn(a.a0), fn(a.a1)};
}

Jet jplus(const Jet& a) { return jlinear(a, [](const LambdaSymbol& s) { return project_parts(s, Side::Plus); }); }
Jet jomega(const Jet& a) { return jlinear(a, omega_parts); }

// L1 (X L2)_{>=0} - (L1 X)_{>=0} L2 + 1/2 L1 Omega([L2, X]) + 1/2 Omega([L1, X]) L2.
Jet polarized(const Jet& l1, const Jet& l2, const Jet& x, int floor) {
  const QScalar half = QScalar(1) / QScalar(2);
  const Jet c2 = jadd(jmul(l2, x, floor), jmul(x, l2, floor), QScalar(-1));
  const Jet c1 = jadd(jmul(l1, x, floor), jmul(x, l1, floor), QScalar(-1));
  Jet out = jmul(l1, jplus(jmul(x, l2, floor)), floor);
  out = jadd(out, jmul(jplus(jmul(l1, x, floor)), l2, floor), QScalar(-1));
  out = jadd(out, jscale(jmul(l1, jomega(c2), floor), half));
  out = jadd(out, jscale(jmul(jomega(c1), l2, floor), half));
  return out;
}

}  // namespace

ScalingLimitReport scaling_limit_check(const QScalar& c, const Symbol& L0, const Symbol& X, int floor) {
  require_floor(floor);
  const Jet d{1, LambdaSymbol(Symbol::identity(Basis::D)), LambdaSymbol()};
  const Jet l{1, LambdaSymbol(L0), LambdaSymbol()};
  const Jet x{-1, LambdaSymbol(X), LambdaSymbol()};
  const Jet quad = polarized(d, d, x, floor);
  const Jet lin = jadd(polarized(d, l, x, floor), polarized(l, d, x, floor));
  ScalingLimitReport r;
  r.quadratic_at_zero = quad.a0;
  r.finite = quad.a0.is_zero();
  r.limit = LogScalar(c) * quad.a1 + lin.a0;
  r.expected = winfty_map(c, L0, X, floor);
  r.matches = r.finite && r.limit.equals_on_window(r.expected);
  return r;
}

}  // namespace qsym
