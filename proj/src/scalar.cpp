#include "qsym/scalar.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <ostream>
#include <utility>

#include "qsym/errors.hpp"

namespace qsym {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PoleAtQ: return "PoleAtQ";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::FloorTooHigh: return "FloorTooHigh";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::NotInvertibleLeading: return "NotInvertibleLeading";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::WindowNotInvariant: return "WindowNotInvariant";
    case ErrorKind::IndexOutOfFormula: return "IndexOutOfFormula";
    case ErrorKind::SingularMode: return "SingularMode";
    case ErrorKind::NotSecondClass: return "NotSecondClass";
    case ErrorKind::SupportEscapesWindow: return "SupportEscapesWindow";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(long c) {
  if (c != 0) c_.emplace_back(c);
}

IntPoly::IntPoly(const mpz_class& c) {
  if (c != 0) c_.push_back(c);
}

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::monomial(const mpz_class& c, int power) {
  IntPoly p;
  if (c == 0) return p;
  p.c_.assign(static_cast<std::size_t>(power) + 1, mpz_class(0));
  p.c_.back() = c;
  return p;
}

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int IntPoly::valuation() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return static_cast<int>(i);
  return 0;
}

mpz_class IntPoly::coeff(int power) const {
  if (power < 0 || power >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(power)];
}

IntPoly IntPoly::operator-() const {
  IntPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpz_class(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpz_class(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1, mpz_class(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return IntPoly(std::move(r));
}

IntPoly IntPoly::scaled(const mpz_class& s) const {
  if (s == 0) return {};
  IntPoly r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

IntPoly IntPoly::shifted(int k) const {
  if (is_zero() || k == 0) return *this;
  IntPoly r;
  if (k > 0) {
    r.c_.assign(static_cast<std::size_t>(k), mpz_class(0));
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  } else {
    r.c_.assign(c_.begin() + std::min<std::ptrdiff_t>(-k, static_cast<std::ptrdiff_t>(c_.size())),
                c_.end());
  }
  return r;
}

IntPoly IntPoly::divexact(const mpz_class& s) const {
  IntPoly r = *this;
  for (auto& c : r.c_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
  return r;
}

IntPoly IntPoly::divexact(const IntPoly& d) const {
  if (d.is_constant()) return divexact(d.lead());
  std::vector<mpz_class> rem = c_;
  const int n = d.degree();
  const int m = degree();
  if (m < n) return {};
  std::vector<mpz_class> quo(static_cast<std::size_t>(m - n) + 1, mpz_class(0));
  for (int k = m; k >= n; --k) {
    mpz_class& top = rem[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    mpz_class f;
    mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), d.lead().get_mpz_t());
    quo[static_cast<std::size_t>(k - n)] = f;
    for (int i = 0; i <= n; ++i) rem[static_cast<std::size_t>(k - n + i)] -= f * d.c_[static_cast<std::size_t>(i)];
  }
  return IntPoly(std::move(quo));
}

mpz_class IntPoly::content() const {
  mpz_class g = 0;
  for (const auto& c : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPoly IntPoly::primitive_part() const {
  if (is_zero()) return {};
  mpz_class g = content();
  if (lead() < 0) g = -g;
  return divexact(g);
}

IntPoly IntPoly::prem(const IntPoly& d) const {
  IntPoly r = *this;
  const int n = d.degree();
  const mpz_class& lc = d.lead();
  while (!r.is_zero() && r.degree() >= n) {
    const int shift = r.degree() - n;
    mpz_class top = r.lead();
    r = r.scaled(lc) - d.scaled(top).shifted(shift);
  }
  return r;
}

mpq_class IntPoly::eval(const mpq_class& r) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + *it;
  return acc;
}

std::strong_ordering operator<=>(const IntPoly& a, const IntPoly& b) {
  if (a.c_.size() != b.c_.size()) return a.c_.size() <=> b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    const int c = cmp(a.c_[i], b.c_[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string IntPoly::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const mpz_class& c = c_[i];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (c < 0)
      out += "-";
    else if (!out.empty())
      out += "+";
    if (i == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += "q";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

IntPoly gcd(const IntPoly& a0, const IntPoly& b0) {
  if (a0.is_zero()) return b0.is_zero() ? IntPoly() : b0.primitive_part().scaled(b0.content());
  if (b0.is_zero()) return a0.primitive_part().scaled(a0.content());
  mpz_class cg;
  mpz_class ca = a0.content();
  mpz_class cb = b0.content();
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  const int va = a0.valuation();
  const int vb = b0.valuation();
  const int v = std::min(va, vb);
  IntPoly a = a0.shifted(-va).primitive_part();
  IntPoly b = b0.shifted(-vb).primitive_part();
  if (a.is_constant() || b.is_constant()) return IntPoly::monomial(cg, v);
  if (a == b) return a.shifted(v).scaled(cg);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    IntPoly r = a.prem(b);
    a = std::move(b);
    b = r.primitive_part();
    if (b.is_constant() && !b.is_zero()) return IntPoly::monomial(cg, v);
  }
  return a.primitive_part().shifted(v).scaled(cg);
}

// ---------------------------------------------------------------- QScalar

QScalar::QScalar(const mpq_class& c) : num_(c.get_num()), den_(c.get_den()) {}

QScalar::QScalar(IntPoly num, IntPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError(ErrorKind::PoleAtQ, "zero denominator");
  canonicalize();
}

QScalar QScalar::qpow(long k) {
  if (k >= 0) return QScalar(IntPoly::monomial(1, static_cast<int>(k)), IntPoly(1));
  QScalar r;
  r.num_ = IntPoly(1);
  r.den_ = IntPoly::monomial(1, static_cast<int>(-k));
  return r;
}

void QScalar::canonicalize() {
  if (num_.is_zero()) {
    den_ = IntPoly(1);
    return;
  }
  if (!den_.is_one()) {
    IntPoly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_.divexact(g);
      den_ = den_.divexact(g);
    }
  }
  if (den_.lead() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

mpq_class QScalar::as_rational() const {
  mpq_class r(num_.coeff(0), den_.coeff(0));
  r.canonicalize();
  return r;
}

QScalar QScalar::operator-() const {
  QScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

QScalar& QScalar::operator+=(const QScalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    canonicalize();
    return *this;
  }
  IntPoly g = gcd(den_, o.den_);
  IntPoly db = den_.divexact(g);
  IntPoly dd = o.den_.divexact(g);
  IntPoly n = num_ * dd + o.num_ * db;
  if (n.is_zero()) return *this = QScalar();
  IntPoly g2 = gcd(n, g);
  if (!g2.is_one()) {
    n = n.divexact(g2);
    g = g.divexact(g2);
  }
  num_ = std::move(n);
  den_ = db * dd * g;
  if (den_.lead() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  return *this;
}

QScalar& QScalar::operator-=(const QScalar& o) { return *this += -o; }

QScalar& QScalar::operator*=(const QScalar& o) {
  if (is_zero() || o.is_zero()) return *this = QScalar();
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ * o.num_;
    return *this;
  }
  IntPoly g1 = gcd(num_, o.den_);
  IntPoly g2 = gcd(o.num_, den_);
  num_ = num_.divexact(g1) * o.num_.divexact(g2);
  den_ = den_.divexact(g2) * o.den_.divexact(g1);
  if (den_.lead() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  return *this;
}

QScalar& QScalar::operator/=(const QScalar& o) { return *this *= o.inverse(); }

QScalar QScalar::inverse() const {
  if (is_zero()) throw DomainError(ErrorKind::PoleAtQ, "inverse of zero");
  QScalar r;
  r.num_ = den_;
  r.den_ = num_;
  if (r.den_.lead() < 0) {
    r.num_ = -r.num_;
    r.den_ = -r.den_;
  }
  return r;
}

QScalar QScalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  QScalar result(1);
  QScalar base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

namespace {

IntPoly substitute_poly(const IntPoly& p, int k) {
  std::vector<mpz_class> r(static_cast<std::size_t>(p.degree() * k + 1), mpz_class(0));
  for (int i = 0; i <= p.degree(); ++i) r[static_cast<std::size_t>(i * k)] = p.coeff(i);
  return IntPoly(std::move(r));
}

IntPoly reversed(const IntPoly& p) {
  std::vector<mpz_class> r(p.coeffs().rbegin(), p.coeffs().rend());
  return IntPoly(std::move(r));
}

}  // namespace

QScalar QScalar::substitute_qpow(int k) const {
  if (k == 0) return QScalar(eval_q(*this, 1));
  if (k < 0) {
    // p(1/q) = rev(p)(q) / q^deg p
    QScalar inv(reversed(num_).shifted(std::max(0, den_.degree() - num_.degree())),
                reversed(den_).shifted(std::max(0, num_.degree() - den_.degree())));
    return inv.substitute_qpow(-k);
  }
  return QScalar(substitute_poly(num_, k), substitute_poly(den_, k));
}

std::strong_ordering operator<=>(const QScalar& a, const QScalar& b) {
  if (auto c = a.num_ <=> b.num_; c != 0) return c;
  return a.den_ <=> b.den_;
}

std::string QScalar::str() const {
  if (den_.is_one()) return num_.str();
  auto multi = [](const IntPoly& p) {
    int terms = 0;
    for (const auto& c : p.coeffs()) terms += (c != 0);
    return terms > 1;
  };
  std::string n = num_.str();
  if (multi(num_)) n = "(" + n + ")";
  std::string d = den_.str();
  if (!(den_.is_constant())) d = "(" + d + ")";
  return n + "/" + d;
}

std::ostream& operator<<(std::ostream& os, const QScalar& s) { return os << s.str(); }

// ---------------------------------------------------------------- q-combinatorics

QScalar qnum(long n) {
  // (q^n - 1)/(q - 1)
  if (n == 0) return {};
  if (n > 0) {
    std::vector<mpz_class> c(static_cast<std::size_t>(n), mpz_class(1));
    return QScalar(IntPoly(std::move(c)), IntPoly(1));
  }
  // -(q^{-1} + ... + q^{n}) = -(1 + q + ... + q^{-n-1}) / q^{-n}
  std::vector<mpz_class> c(static_cast<std::size_t>(-n), mpz_class(-1));
  return QScalar(IntPoly(std::move(c)), IntPoly::monomial(1, static_cast<int>(-n)));
}

QScalar qfalling(long m, long k) {
  QScalar r(1);
  for (long i = 0; i < k; ++i) {
    r *= qnum(m - i);
    if (r.is_zero()) break;
  }
  return r;
}

QScalar qfactorial(long k) { return qfalling(k, k); }

namespace {

std::atomic<bool> g_qbinomial_fault{false};
std::mutex g_qbinomial_mutex;
std::map<std::pair<long, long>, QScalar>& qbinomial_cache() {
  static std::map<std::pair<long, long>, QScalar> cache;
  return cache;
}

// The injected fault shifts nonzero values only, so finite sums stay finite.
QScalar faulted(const QScalar& v, long k) {
  return g_qbinomial_fault.load() && k >= 2 && !v.is_zero() ? v + QScalar(1) : v;
}

}  // namespace

QScalar qbinomial(long m, long k) {
  if (k < 0) return {};
  if (k == 0) return QScalar(1);
  {
    std::lock_guard<std::mutex> lock(g_qbinomial_mutex);
    auto it = qbinomial_cache().find({m, k});
    if (it != qbinomial_cache().end()) return faulted(it->second, k);
  }
  QScalar value = qfalling(m, k) / qfactorial(k);
  {
    std::lock_guard<std::mutex> lock(g_qbinomial_mutex);
    qbinomial_cache().emplace(std::make_pair(m, k), value);
  }
  return faulted(value, k);
}

mpq_class eval_q(const QScalar& s, const mpq_class& r) {
  mpq_class d = s.den().eval(r);
  if (d == 0) throw DomainError(ErrorKind::PoleAtQ, "denominator " + s.den().str() + " vanishes");
  mpq_class v = s.num().eval(r) / d;
  v.canonicalize();
  return v;
}

namespace detail {
void set_qbinomial_fault(bool enabled) { g_qbinomial_fault.store(enabled); }
}  // namespace detail

}  // namespace qsym
