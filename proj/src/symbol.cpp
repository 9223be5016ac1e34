#include "qsym/symbol.hpp"

#include <algorithm>
#include <vector>

#include "qsym/errors.hpp"

namespace qsym {

namespace {

// Bound on the number of expansion steps allowed for an exact (untruncated)
// product before we conclude it does not terminate.
constexpr int kMaxExactSteps = 512;

bool is_exact_floor(int f) { return f <= Symbol::kExact / 2; }

int shifted_floor(int f, int t) {
  if (is_exact_floor(f)) return Symbol::kExact;
  return f + t;
}

void require_same_basis(const Symbol& a, const Symbol& b) {
  if (a.basis() != b.basis())
    throw DomainError(ErrorKind::BasisMismatch, "symbols in different bases");
}

void require_basis(const Symbol& a, Basis b) {
  if (a.basis() != b)
    throw DomainError(ErrorKind::BasisMismatch,
                      std::string("expected a symbol in the ") + to_string(b) + " basis");
}

QScalar qm1() { return QScalar::q() - QScalar(1); }

[[noreturn]] void infinite_expansion() {
  throw DomainError(ErrorKind::FloorTooHigh, "infinite expansion needs a finite floor");
}

}  // namespace

const char* to_string(Basis b) { return b == Basis::T ? "T" : "D"; }

// ---------------------------------------------------------------- Symbol

Symbol Symbol::monomial(Basis basis, const LaurentField& c, int order, int floor) {
  Symbol s(basis, floor);
  if (order >= floor) s.set(order, c);
  return s;
}

std::optional<int> Symbol::top() const {
  if (c_.empty()) return std::nullopt;
  return c_.rbegin()->first;
}

int Symbol::effective_top() const {
  int t = exact() ? kExact : floor_ - 1;
  if (!c_.empty()) t = std::max(t, c_.rbegin()->first);
  return t;
}

LaurentField Symbol::coeff(int order) const {
  if (order < floor_)
    throw DomainError(ErrorKind::FloorTooHigh, "order " + std::to_string(order) +
                                                   " is below the floor " + std::to_string(floor_));
  return raw_coeff(order);
}

LaurentField Symbol::raw_coeff(int order) const {
  auto it = c_.find(order);
  return it == c_.end() ? LaurentField() : it->second;
}

void Symbol::set(int order, const LaurentField& f) {
  if (f.is_zero())
    c_.erase(order);
  else
    c_[order] = f;
}

void Symbol::add(int order, const LaurentField& f) {
  if (f.is_zero()) return;
  auto [it, inserted] = c_.try_emplace(order, f);
  if (!inserted) {
    it->second += f;
    if (it->second.is_zero()) c_.erase(it);
  }
}

Symbol Symbol::truncated(int floor) const {
  if (floor <= floor_) return *this;
  Symbol r(basis_, floor);
  for (auto it = c_.lower_bound(floor); it != c_.end(); ++it) r.c_.insert(*it);
  return r;
}

Symbol Symbol::with_floor(int floor) const {
  Symbol r = *this;
  r.floor_ = std::min(floor, floor_);
  return r;
}

Symbol Symbol::operator-() const {
  Symbol r(basis_, floor_);
  for (const auto& [i, f] : c_) r.c_.emplace(i, -f);
  return r;
}

Symbol& Symbol::operator+=(const Symbol& o) {
  require_same_basis(*this, o);
  if (o.floor_ > floor_) *this = truncated(o.floor_);
  for (auto it = o.c_.lower_bound(floor_); it != o.c_.end(); ++it) add(it->first, it->second);
  return *this;
}

Symbol& Symbol::operator-=(const Symbol& o) { return *this += -o; }

Symbol& Symbol::operator*=(const QScalar& s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto& [i, f] : c_) f *= s;
  return *this;
}

Symbol Symbol::slice(int lo, int hi) const {
  Symbol r(basis_, floor_);
  for (auto it = c_.lower_bound(lo); it != c_.end() && it->first <= hi; ++it) r.c_.insert(*it);
  return r;
}

Symbol Symbol::map_coeffs(const std::function<LaurentField(const LaurentField&)>& fn) const {
  Symbol r(basis_, floor_);
  for (const auto& [i, f] : c_) r.set(i, fn(f));
  return r;
}

bool Symbol::equals_on_window(const Symbol& o) const {
  if (basis_ != o.basis_) return false;
  const int fl = std::max(floor_, o.floor_);
  auto a = c_.lower_bound(fl);
  auto b = o.c_.lower_bound(fl);
  for (; a != c_.end() && b != o.c_.end(); ++a, ++b)
    if (a->first != b->first || a->second != b->second) return false;
  return a == c_.end() && b == o.c_.end();
}

std::string Symbol::str() const {
  if (c_.empty()) return "0";
  const char* op = basis_ == Basis::T ? "T" : "D";
  std::string out;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    const auto& [i, f] = *it;
    std::string fs = f.str();
    const bool single = f.terms().size() == 1 && f.terms().begin()->second.size() == 1;
    std::string term;
    if (i == 0) {
      term = single ? fs : "(" + fs + ")";
    } else {
      const std::string o = std::string(op) + "^" + std::to_string(i);
      if (fs == "1")
        term = o;
      else if (fs == "-1")
        term = "-" + o;
      else
        term = (single ? fs : "(" + fs + ")") + "*" + o;
    }
    out += (out.empty() ? "" : " + ") + term;
  }
  return out;
}

// ---------------------------------------------------------------- products

int product_floor(const Symbol& a, const Symbol& b) {
  if ((a.exact() && a.is_zero()) || (b.exact() && b.is_zero())) return Symbol::kExact;
  const int fa = a.exact() ? Symbol::kExact : shifted_floor(a.floor(), b.effective_top());
  const int fb = b.exact() ? Symbol::kExact : shifted_floor(b.floor(), a.effective_top());
  return std::max({fa, fb, Symbol::kExact});
}

Symbol mul(const Symbol& a, const Symbol& b, int min_floor) {
  require_same_basis(a, b);
  const int fl = std::max(product_floor(a, b), min_floor);
  Symbol r(a.basis(), fl);
  if (a.basis() == Basis::T) {
    for (const auto& [i, f] : a.coeffs())
      for (const auto& [j, g] : b.coeffs())
        if (i + j >= fl) r.add(i + j, f * shift(g, i));
    return r;
  }
  const bool exact = is_exact_floor(fl);
  const bool has_negative = !a.coeffs().empty() && a.coeffs().begin()->first < 0;
  for (const auto& [j, g] : b.coeffs()) {
    // D^i g with i < 0 terminates only when g is a polynomial in z
    if (exact && has_negative && (!g.is_concrete() || g.min_zexp() < 0)) infinite_expansion();
    // q-derivatives of g, computed on demand and shared across the orders of a
    std::vector<LaurentField> dg{g};
    for (const auto& [i, f] : a.coeffs()) {
      for (int k = 0;; ++k) {
        const int ord = i + j - k;
        if (ord < fl) break;
        if (exact && k > kMaxExactSteps) infinite_expansion();
        if (k == static_cast<int>(dg.size())) dg.push_back(qderive(dg.back()));
        if (dg[k].is_zero()) break;
        const QScalar bin = qbinomial(i, k);
        if (bin.is_zero()) {
          if (i >= 0 && k > i) break;
          continue;
        }
        r.add(ord, bin * (f * shift(dg[k], i - k)));
      }
    }
  }
  return r;
}

Symbol mul_symbolcalc(const Symbol& a, const Symbol& b) {
  require_same_basis(a, b);
  require_basis(a, Basis::D);
  const int fl = product_floor(a, b);
  const bool exact = is_exact_floor(fl);
  Symbol r(Basis::D, fl);
  if (a.is_zero() || b.is_zero()) return r;
  const int top = *a.top() + *b.top();
  Symbol da = a;  // k-th derivative in the operator variable
  Symbol db = b;  // coefficient-wise k-th q-derivative
  for (int k = 0; top - k >= fl; ++k) {
    if (exact && k > kMaxExactSteps) infinite_expansion();
    if (da.is_zero() || db.is_zero()) break;
    const QScalar inv_fact = qfactorial(k).inverse();
    for (const auto& [i, f] : da.coeffs())
      for (const auto& [j, g] : db.coeffs())
        if (i + j >= fl) r.add(i + j, inv_fact * (f * shift(g, i)));
    Symbol nda(Basis::D, da.floor());
    for (const auto& [i, f] : da.coeffs()) nda.add(i - 1, qnum(i) * f);
    da = nda;
    db = db.map_coeffs([](const LaurentField& g) { return qderive(g); });
  }
  return r;
}

Symbol commutator(const Symbol& a, const Symbol& b) { return mul(a, b) - mul(b, a); }

Symbol left_mul(const LaurentField& f, const Symbol& a) {
  return a.map_coeffs([&](const LaurentField& c) { return f * c; });
}

// ---------------------------------------------------------------- residues and traces

LaurentField res_T(const Symbol& a) {
  require_basis(a, Basis::T);
  return a.coeff(0);
}

LaurentField res_D(const Symbol& a) {
  require_basis(a, Basis::D);
  return a.coeff(-1);
}

LaurentField omega(const Symbol& a) {
  return LaurentField::monomial(qm1() / QScalar::q(), 1) *
         res_D(a);
}

LaurentField t0_from_D(const Symbol& a) {
  require_basis(a, Basis::D);
  if (a.floor() > 0)
    throw DomainError(ErrorKind::FloorTooHigh, "order-0 part needs a floor <= 0");
  const Symbol diff = a.slice(0, Symbol::kExact * -1).with_floor(Symbol::kExact);
  if (diff.is_zero()) return LaurentField();
  const int n = *diff.top();
  return omega(mul(diff, tinv_in_D(-1 - n), -1));
}

QScalar trace(const Symbol& a) {
  if (a.basis() == Basis::T) return integrate(res_T(a));
  return integrate(t0_from_D(a));
}

QScalar pairing(const Symbol& a, const Symbol& b) {
  require_same_basis(a, b);
  const Symbol ab = mul(a, b);
  if (a.basis() == Basis::T) return integrate(res_T(ab));
  if (ab.is_zero() && ab.exact()) return QScalar(0);
  const int f = -1 - std::max(ab.effective_top(), 0);
  const Symbol abt = mul(ab, tinv_in_D(f), -1);
  return (qm1() / QScalar::q()) * integrate_m1(res_D(abt));
}

QScalar pairing_via_D(const Symbol& a, const Symbol& b) {
  require_same_basis(a, b);
  if (a.basis() == Basis::D) return pairing(a, b);
  auto depth = [](const Symbol& x, const Symbol& other) {
    if (!x.exact()) return x.floor();
    return -std::max(other.effective_top(), 0) - 1;
  };
  return pairing(convert(a, Basis::D, depth(a, b)), convert(b, Basis::D, depth(b, a)));
}

// ---------------------------------------------------------------- basis change

Symbol tinv_in_D(int floor) {
  if (is_exact_floor(floor)) infinite_expansion();
  Symbol s(Basis::D, floor);
  const QScalar ratio = -QScalar::q() / qm1();
  QScalar c(1);
  for (int i = 1; -i >= floor; ++i) {
    c *= ratio;
    s.set(-i, LaurentField::monomial(-c, -i));
  }
  return s;
}

Symbol t_in_D() {
  Symbol s(Basis::D);
  s.set(1, LaurentField::monomial(qm1(), 1));
  s.set(0, LaurentField(1));
  return s;
}

Symbol d_in_T() {
  const QScalar c = qm1().inverse();
  Symbol s(Basis::T);
  s.set(1, LaurentField::monomial(c, -1));
  s.set(0, LaurentField::monomial(-c, -1));
  return s;
}

Symbol dinv_in_T(int floor) {
  if (is_exact_floor(floor)) infinite_expansion();
  Symbol s(Basis::T, floor);
  const QScalar c = qm1();
  for (int i = 1; -i >= floor; ++i) s.set(-i, LaurentField::monomial(c * QScalar::qpow(-i), 1));
  return s;
}

Symbol convert(const Symbol& a, Basis target, int floor) {
  const int fl = std::max(floor, a.floor());
  if (a.basis() == target) return a.truncated(fl);
  const bool to_d = target == Basis::D;
  Symbol r(target, fl);
  if (a.is_zero()) return r;
  const Symbol up = to_d ? t_in_D() : d_in_T();
  const int lo = std::max(a.coeffs().begin()->first, fl);
  if (lo < 0 && is_exact_floor(fl)) infinite_expansion();
  Symbol pos = Symbol::identity(target);
  Symbol neg = Symbol::identity(target);
  Symbol down = lo < 0 ? (to_d ? tinv_in_D(fl) : dinv_in_T(fl)) : Symbol(target);
  int pos_k = 0;
  int neg_k = 0;
  for (const auto& [i, f] : a.coeffs()) {
    if (i < fl) continue;
    if (i >= 0) {
      for (; pos_k < i; ++pos_k) pos = mul(pos, up);
      r += left_mul(f, pos.truncated(fl));
    }
  }
  for (auto it = a.coeffs().rbegin(); it != a.coeffs().rend(); ++it) {
    const auto& [i, f] = *it;
    if (i >= 0 || i < fl) continue;
    for (; neg_k < -i; ++neg_k) neg = mul(neg, down, fl).truncated(fl);
    r += left_mul(f, neg);
  }
  return r.truncated(fl);
}

// ---------------------------------------------------------------- projections

namespace {

// Part of a with orders >= lo; exact whenever the floor lies at or below lo.
Symbol upper_part(const Symbol& a, int lo) {
  Symbol r = a.slice(lo, Symbol::kExact * -1);
  return a.floor() <= lo ? r.with_floor(Symbol::kExact) : r;
}

Symbol lower_part(const Symbol& a, int hi) { return a.slice(Symbol::kExact, hi); }

void require_no_constant_mode(const LaurentField& t0) {
  if (t0.is_concrete() && !t0.coeff(0).is_zero())
    throw DomainError(ErrorKind::NotInDomain,
                      "the constant mode of the order-0 coefficient is not split by sigma=0");
}

}  // namespace

Symbol project(const Symbol& a, Side side, Splitting s) {
  const bool plus = side == Side::Plus;
  const Basis b = a.basis();
  switch (s.sigma) {
    case -1:
      return plus ? upper_part(a, 0) : lower_part(a, -1);
    case 1: {
      if (b == Basis::T) return plus ? upper_part(a, 1) : lower_part(a, 0);
      const Symbol t0 = Symbol::function(b, t0_from_D(a));
      return plus ? upper_part(a, 0) - t0 : lower_part(a, -1) + t0;
    }
    case 0: {
      const LaurentField t0 = b == Basis::T ? a.coeff(0) : t0_from_D(a);
      require_no_constant_mode(t0);
      const Proj p = plus ? Proj::Plus : Proj::Minus;
      const Symbol piece = Symbol::function(b, project(t0, p));
      if (plus) {
        if (b == Basis::T) return upper_part(a, 1) + piece;
        return upper_part(a, 0) - Symbol::function(b, t0) + piece;
      }
      return lower_part(a, -1) + piece;
    }
    default:
      throw DomainError(ErrorKind::NotInDomain, "sigma must be -1, 0 or 1");
  }
}

// ---------------------------------------------------------------- adjoint

Symbol adjoint(const Symbol& a, int floor) {
  if (a.basis() == Basis::T) {
    Symbol r(Basis::T);
    for (const auto& [i, f] : a.coeffs()) r.set(-i, shift(f, -i));
    return r;
  }
  // D* = -D T^-1 and (D*)^-1 = -T D^-1 = -(q-1) z - D^-1, both in the D basis.
  Symbol r(Basis::D, floor);
  if (a.is_zero()) return r;
  const Symbol d = Symbol::monomial(Basis::D, LaurentField(1), 1);
  const int top = std::max(*a.top(), 0);
  Symbol dstar;
  if (top > 0) {
    if (is_exact_floor(floor)) infinite_expansion();
    dstar = -mul(d, tinv_in_D(floor - top), floor - top);
  }
  Symbol dstar_inv(Basis::D);
  dstar_inv.set(0, LaurentField::monomial(-qm1(), 1));
  dstar_inv.set(-1, LaurentField(-1));
  Symbol pos = Symbol::identity(Basis::D);
  Symbol neg = Symbol::identity(Basis::D);
  int pos_k = 0;
  int neg_k = 0;
  for (const auto& [i, f] : a.coeffs()) {
    Symbol op;
    if (i >= 0) {
      for (; pos_k < i; ++pos_k) pos = mul(pos, dstar, floor);
      op = pos;
    } else {
      for (; neg_k < -i; ++neg_k) neg = mul(neg, dstar_inv, floor);
      op = neg;
    }
    r += mul(op, Symbol::function(Basis::D, f), floor).truncated(floor);
  }
  return r;
}

// ---------------------------------------------------------------- powers, roots, inverses

Symbol power(const Symbol& a, int p) {
  if (p < 0) return power(invert(a), -p);
  Symbol r = Symbol::identity(a.basis());
  for (int k = 0; k < p; ++k) r = mul(r, a);
  return r;
}

Symbol nth_root(const Symbol& a, int n) {
  if (n < 1) throw DomainError(ErrorKind::NotInDomain, "root index must be positive");
  if (a.basis() == Basis::D) {
    const Symbol r = nth_root(convert(a, Basis::T, a.floor()), n);
    return convert(r, Basis::D, r.floor());
  }
  if (a.top() != n || a.coeffs().rbegin()->second != LaurentField(1))
    throw DomainError(ErrorKind::NotMonic, "expected leading term T^" + std::to_string(n));
  for (const auto& [i, f] : a.coeffs())
    if (!f.is_concrete())
      throw DomainError(ErrorKind::NotInDomain, "root of a symbol with formal coefficients");
  if (a.exact()) infinite_expansion();
  const int root_floor = a.floor() - (n - 1);
  Symbol r = Symbol::monomial(Basis::T, LaurentField(1), 1);
  for (int ord = 0; ord >= root_floor; --ord) {
    const int target = n - 1 + ord;
    Symbol rn = Symbol::identity(Basis::T);
    for (int k = 0; k < n; ++k) rn = mul(rn, r);
    const LaurentField diff = a.coeff(target) - rn.raw_coeff(target);
    ZPoly sol;
    for (const auto& [m, c] : diff.zpoly()) {
      QScalar denom(0);
      for (int p = 0; p < n; ++p) denom += QScalar::qpow(static_cast<long>(p) * m);
      sol.emplace(m, c / denom);
    }
    r.set(ord, LaurentField::from_zpoly(sol));
  }
  return r.truncated(root_floor).with_floor(root_floor);
}

Symbol invert(const Symbol& a, std::optional<int> floor) {
  if (a.is_zero()) throw DomainError(ErrorKind::NotInvertibleLeading, "inverse of zero");
  const int n = *a.top();
  const LaurentField lead_inv = invert_monomial(a.coeffs().rbegin()->second);
  const bool monomial = a.coeffs().size() == 1;
  int target = Symbol::kExact;
  if (floor)
    target = *floor;
  else if (!a.exact())
    target = a.floor() - 2 * n;
  else if (!(monomial && a.basis() == Basis::T))
    infinite_expansion();
  const Symbol minv =
      mul(Symbol::monomial(a.basis(), LaurentField(1), -n), Symbol::function(a.basis(), lead_inv),
          target);
  if (monomial && a.exact()) return minv.truncated(target);
  Symbol rest = a;
  rest.set(n, LaurentField());
  const Symbol b = mul(minv, rest, target);
  Symbol sum = minv;
  Symbol term = minv;
  for (int k = 0; k < kMaxExactSteps; ++k) {
    term = -mul(b, term, target);
    if (term.is_zero()) break;
    sum += term;
  }
  return sum.truncated(target);
}

// ---------------------------------------------------------------- evaluation

Symbol eval_at_q(const Symbol& a, const mpq_class& r) {
  return a.map_coeffs([&](const LaurentField& f) {
    return f.map_coeffs([&](const QScalar& c) { return QScalar(eval_q(c, r)); });
  });
}

Symbol limit_q1(const Symbol& a) { return eval_at_q(a, mpq_class(1)); }

}  // namespace qsym
