#include "qsym/parse.hpp"

#include <cctype>
#include <optional>

#include "qsym/errors.hpp"

namespace qsym {

namespace {

class Parser {
 public:
  Parser(const std::string& text, Basis basis, int floor) : s_(text), basis_(basis), floor_(floor) {}

  Symbol run() {
    Symbol v = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

  std::optional<Basis> seen() const { return seen_; }

 private:
  const std::string& s_;
  Basis basis_;
  int floor_;
  std::optional<Basis> seen_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(size_t at, const std::string& what) const {
    int line = 1, col = 1;
    for (size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(what, line, col);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool accept_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    pos_ += w.size();
    return true;
  }

  long integer() {
    skip();
    const size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    const size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) fail_at(start, "expected an integer");
    try {
      return std::stol(s_.substr(start, pos_ - start));
    } catch (const std::out_of_range&) {
      fail_at(start, "integer out of range");
    }
  }

  Symbol scalar(const QScalar& c) const { return Symbol::function(basis_, LaurentField(c)); }

  Symbol field(const LaurentField& f) const { return Symbol::function(basis_, f); }

  // The field of an order-0 symbol.
  LaurentField as_field(const Symbol& v, size_t at) const {
    for (const auto& [i, c] : v.coeffs())
      if (i != 0) fail_at(at, "expected a function, found an operator");
    return v.raw_coeff(0);
  }

  std::optional<QScalar> as_scalar(const Symbol& v) const {
    if (!v.exact()) return std::nullopt;
    for (const auto& [i, c] : v.coeffs())
      if (i != 0) return std::nullopt;
    const LaurentField f = v.raw_coeff(0);
    if (!f.is_concrete()) return std::nullopt;
    const ZPoly p = f.zpoly();
    if (p.empty()) return QScalar(0);
    if (p.size() != 1 || p.begin()->first != 0) return std::nullopt;
    return p.begin()->second;
  }

  // B^k in the symbol's basis; the other operator is rewritten (T = 1 + (q-1) z D,
  // negative powers of it as series cut at the floor).
  Symbol op_power(Basis b, int k) const {
    if (b == basis_) return Symbol::monomial(b, LaurentField(1), k);
    Symbol one = b == Basis::T ? t_in_D() : d_in_T();
    if (k < 0) one = b == Basis::T ? tinv_in_D(floor_) : dinv_in_T(floor_);
    Symbol out = Symbol::identity(basis_);
    for (int i = 0; i < (k < 0 ? -k : k); ++i) out = mul(out, one, floor_);
    return out;
  }

  Symbol product(const Symbol& a, const Symbol& b, size_t at) {
    if (a.basis() != b.basis()) {
      // Pure functions parsed before the basis was known are basis-free.
      const Basis target = seen_.value_or(basis_);
      return product(rebase(a, target, at), rebase(b, target, at), at);
    }
    // Only D^-k to the left of a function expands as an infinite series.
    const bool finite = a.basis() == Basis::T || a.coeffs().empty() || a.coeffs().begin()->first >= 0;
    return finite && a.exact() && b.exact() ? mul(a, b) : mul(a, b, floor_);
  }

  Symbol rebase(const Symbol& a, Basis b, size_t at) const {
    if (a.basis() == b) return a;
    return field(as_field(a, at));
  }

  Symbol add(const Symbol& a, const Symbol& b, size_t at) const {
    const Basis target = seen_.value_or(basis_);
    return rebase(a, target, at) + rebase(b, target, at);
  }

  Symbol expr() {
    const size_t at = pos_;
    Symbol v = term();
    for (;;) {
      if (accept('+'))
        v = add(v, term(), at);
      else if (accept('-'))
        v = add(v, -term(), at);
      else
        return v;
    }
  }

  Symbol term() {
    Symbol v = unary();
    for (;;) {
      const size_t at = pos_;
      if (accept('*')) {
        v = product(v, unary(), at);
      } else if (accept('/')) {
        const size_t dat = pos_;
        const std::optional<QScalar> d = as_scalar(unary());
        if (!d) fail_at(dat, "division only by scalars in q");
        if (d->is_zero()) fail_at(dat, "division by zero");
        v *= QScalar(1) / *d;
      } else {
        return v;
      }
    }
  }

  Symbol unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Symbol power() {
    const size_t at = pos_;
    skip();
    // T and D carry their exponent as part of the atom.
    if (pos_ < s_.size() && (s_[pos_] == 'T' || s_[pos_] == 'D')) {
      const Basis b = s_[pos_] == 'T' ? Basis::T : Basis::D;
      ++pos_;
      if (!seen_) seen_ = basis_ = b;
      const long k = accept('^') ? integer() : 1;
      return op_power(b, static_cast<int>(k));
    }
    Symbol base = atom();
    if (!accept('^')) return base;
    const size_t eat = pos_;
    const long k = integer();
    if (const std::optional<QScalar> c = as_scalar(base)) {
      if (c->is_zero() && k < 0) fail_at(eat, "zero to a negative power");
      if (*c == QScalar::q()) return scalar(QScalar::qpow(k));
      QScalar r(1);
      const QScalar b = k < 0 ? QScalar(1) / *c : *c;
      for (long i = 0; i < (k < 0 ? -k : k); ++i) r *= b;
      return scalar(r);
    }
    const LaurentField f = as_field(base, at);
    if (f.is_concrete() && f.zpoly().size() == 1) {
      const auto [e, c] = *f.zpoly().begin();
      if (c == QScalar(1)) return field(LaurentField::z(static_cast<int>(e * k)));
    }
    if (k < 0) fail_at(eat, "negative powers only of q, z and monomials");
    LaurentField r(1);
    for (long i = 0; i < k; ++i) r = r * f;
    return field(r);
  }

  Symbol wrapped(const std::function<LaurentField(const LaurentField&)>& fn) {
    expect('(');
    const size_t at = pos_;
    const Symbol inner = expr();
    expect(')');
    return field(fn(as_field(inner, at)));
  }

  Symbol atom() {
    const char c = peek();
    const size_t at = pos_;
    if (c == '(') {
      ++pos_;
      Symbol v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return scalar(QScalar(IntPoly::monomial(mpz_class(s_.substr(start, pos_ - start)), 0), IntPoly(1)));
    }
    if (accept_word("tau^")) {
      const long k = integer();
      return wrapped([k](const LaurentField& f) { return shift(f, static_cast<int>(k)); });
    }
    if (accept_word("E(")) {
      --pos_;
      return wrapped([](const LaurentField& f) { return euler_derive(f); });
    }
    for (const auto& [w, p] : {std::pair{"p+(", Proj::Plus}, {"p-(", Proj::Minus}, {"p0(", Proj::Zero}}) {
      if (accept_word(w)) {
        --pos_;
        const Proj pr = p;
        return wrapped([pr](const LaurentField& f) { return project(f, pr); });
      }
    }
    if (c == 'q') {
      ++pos_;
      return scalar(QScalar::q());
    }
    if (c == 'z') {
      ++pos_;
      return field(LaurentField::z());
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      ++pos_;
      size_t p = pos_;
      if (p < s_.size() && s_[p] == '_') ++p;
      const size_t sign = p;
      if (p < s_.size() && s_[p] == '-') ++p;
      const size_t digits = p;
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
      if (p == digits) fail_at(at, std::string("unknown name '") + c + "'");
      pos_ = p;
      const int index = std::stoi(s_.substr(sign, p - sign));
      return field(LaurentField::var(c, index));
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }
};

}  // namespace

Symbol parse_symbol(const std::string& text, Basis basis, int floor) {
  Parser p(text, basis, floor);
  Symbol v = p.run();
  return v.basis() == basis || p.seen() ? v : Symbol::function(basis, v.raw_coeff(0));
}

LaurentField parse_field(const std::string& text) {
  const Symbol v = parse_symbol(text, Basis::T, Symbol::kExact);
  for (const auto& [i, c] : v.coeffs())
    if (i != 0) throw ParseError("expected a function, found an operator", 1, 1);
  return v.raw_coeff(0);
}

QScalar parse_scalar(const std::string& text) {
  const LaurentField f = parse_field(text);
  if (!f.is_concrete()) throw ParseError("expected a scalar in q", 1, 1);
  const ZPoly p = f.zpoly();
  if (p.empty()) return QScalar(0);
  if (p.size() != 1 || p.begin()->first != 0) throw ParseError("expected a scalar in q", 1, 1);
  return p.begin()->second;
}

}  // namespace qsym
