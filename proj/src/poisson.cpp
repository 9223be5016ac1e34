#include "qsym/poisson.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>

#include "qsym/errors.hpp"

namespace qsym {

namespace {

LaurentField fvar(char name, int index, int shift = 0) { return LaurentField::var(name, index, shift); }

Symbol dpow(int k) { return Symbol::monomial(Basis::D, LaurentField(1), k); }

}  // namespace

// ---------------------------------------------------------------- windows

bool PhaseWindow::has_index(int i) const {
  if (basis == Basis::T) return i <= n && (!m || i >= *m);
  return i >= 0 && (!m || i <= n - *m);
}

std::vector<int> PhaseWindow::indices() const {
  if (!m) throw DomainError(ErrorKind::NotInDomain, "infinite window has no finite index list");
  std::vector<int> out;
  if (basis == Basis::T)
    for (int i = *m; i <= n; ++i) out.push_back(i);
  else
    for (int i = 0; i <= n - *m; ++i) out.push_back(i);
  return out;
}

Symbol PhaseWindow::formal_lax(int floor) const {
  if (basis == Basis::T) {
    if (!m) throw DomainError(ErrorKind::NotInDomain, "T-basis windows need a finite lower end");
    Symbol L(Basis::T);
    for (int i = *m; i <= n; ++i) L.set(i, fvar('t', i));
    return L;
  }
  if (m) {
    Symbol L(Basis::D);
    for (int i = 0; i <= n - *m; ++i) L.set(n - i, fvar('u', i));
    return L;
  }
  if (floor <= Symbol::kExact / 2)
    throw DomainError(ErrorKind::FloorTooHigh, "infinite window needs a truncation floor");
  Symbol L(Basis::D, floor);
  for (int r = n; r >= floor; --r) L.set(r, fvar('u', n - r));
  return L;
}

std::string PhaseWindow::str() const {
  std::ostringstream os;
  os << to_string(basis) << "(" << n << "," << (m ? std::to_string(*m) : std::string("-inf")) << ")";
  return os.str();
}

// ---------------------------------------------------------------- one-forms

OneForm OneForm::single(const PhaseWindow& w, int j, const LaurentField& xj) {
  OneForm f{w, {}};
  f.x[j] = xj;
  return f;
}

OneForm OneForm::formal(const PhaseWindow& w) {
  OneForm f{w, {}};
  for (int j : w.indices()) f.x[j] = fvar('x', j);
  return f;
}

Symbol OneForm::to_symbol(int floor) const {
  if (window.basis == Basis::T) {
    Symbol X(Basis::T);
    for (const auto& [j, xj] : x) X.add(-j, shift(xj, -j));
    return X;
  }
  Symbol X(Basis::D, floor);
  const Symbol t = t_in_D();
  for (const auto& [j, xj] : x) {
    const Symbol op = mul(dpow(j - window.n - 1), t, floor);
    X += mul(op, Symbol::function(Basis::D, xj), floor);
  }
  return X;
}

// ---------------------------------------------------------------- maps

namespace {

// For sigma = 0 the identity is central and no commutator has a constant
// order-0 mode, so R extends to the constant mode by zero.
Symbol r_extended(Splitting sigma, const Symbol& a) {
  if (sigma.sigma != 0) return r_apply(sigma, a);
  const LaurentField t0 = a.basis() == Basis::T ? a.coeff(0) : t0_from_D(a);
  return r_apply(sigma, a - Symbol::function(a.basis(), constant_part(t0)));
}

}  // namespace

Symbol jmap(int s, Splitting sigma, const Symbol& L, const Symbol& X) {
  const Symbol LX = mul(L, X);
  const Symbol XL = mul(X, L);
  const Symbol rs = rstar_apply(sigma, LX - XL);
  switch (s) {
    case 1:
      return commutator(L, r_extended(sigma, X)) + rs;
    case 2:
      return commutator(L, r_extended(sigma, LX + XL)) + mul(L, rs) + mul(rs, L);
    case 3:
      return commutator(L, r_extended(sigma, mul(LX, L))) + mul(mul(L, rs), L);
    default:
      throw DomainError(ErrorKind::NotInDomain, "structure must be 1, 2 or 3");
  }
}

void check_window(int s, Splitting sigma, const PhaseWindow& w) {
  if (s < 1 || s > 3) throw DomainError(ErrorKind::NotInDomain, "structure must be 1, 2 or 3");
  using Key = std::tuple<int, int, int, int, int, bool>;
  static std::mutex mu;
  static std::map<Key, bool> cache;
  const Key key{s, sigma.sigma, static_cast<int>(w.basis), w.n, w.m.value_or(0), w.m.has_value()};
  bool ok = false;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) ok = it->second;
    else {
      if (w.basis == Basis::T && !w.m) {
        // the lower end is unbounded: formal X is unbounded above, use the
        // order bounds of the maps directly
        ok = s == 2 || (s == 1 && w.n >= 0) || (s == 3 && w.n == 0);
      } else {
        // the D-basis one-form is an infinite series
        const int floor = w.basis == Basis::T ? Symbol::kExact : w.m.value_or(w.n) - 4;
        const Symbol L = w.formal_lax(floor);
        const Symbol X = OneForm::formal(w.m ? w : PhaseWindow::D(w.n, floor)).to_symbol(floor);
        const Symbol J = jmap(s, sigma, L, X);
        ok = true;
        for (const auto& [r, c] : J.coeffs()) {
          if (r < J.floor()) continue;
          if (r > w.n || (w.m && r < *w.m)) ok = false;
        }
      }
      cache.emplace(key, ok);
    }
  }
  if (!ok)
    throw DomainError(ErrorKind::WindowNotInvariant,
                      "J" + std::to_string(s) + " does not preserve the window " + w.str());
}

Symbol jmap(int s, Splitting sigma, const Symbol& L, const OneForm& X, int floor) {
  check_window(s, sigma, X.window);
  return jmap(s, sigma, L, X.to_symbol(floor));
}

QScalar bracket(int s, Splitting sigma, const Symbol& L, const Symbol& X, const Symbol& Y) {
  return pairing(jmap(s, sigma, L, X), Y);
}

// ---------------------------------------------------------------- kernels

namespace {

// Adjoint of a mode projector under int f g.
Proj adjoint_proj(Proj p) {
  if (p == Proj::Plus) return Proj::Minus;
  if (p == Proj::Minus) return Proj::Plus;
  return p;
}

// Splits a single-term expression c z^k N tau^a(x) into (a, c z^k N).
std::pair<int, LaurentField> split_content(const LaurentField& content) {
  if (content.terms().size() != 1)
    throw DomainError(ErrorKind::NotInDomain, "kernel term is not a difference operator");
  const auto& [mono, poly] = *content.terms().begin();
  int a = 0;
  bool found = false;
  LaurentField rest = LaurentField::from_zpoly(poly);
  for (const auto& vp : mono) {
    if (vp.var.name == 'x' && !vp.var.atom) {
      if (found || vp.exponent != 1 || vp.var.euler != 0 || vp.var.proj != Proj::None)
        throw DomainError(ErrorKind::NotInDomain, "kernel term is not a difference operator");
      a = vp.var.shift;
      found = true;
      continue;
    }
    for (int e = 0; e < vp.exponent; ++e) rest = rest * LaurentField::var(vp.var);
  }
  if (!found) throw DomainError(ErrorKind::NotInDomain, "kernel term is not a difference operator");
  return {a, rest};
}

// Pulls a lone scalar coefficient out of a single-term field.
std::pair<QScalar, LaurentField> split_scalar(const LaurentField& f) {
  if (f.terms().size() == 1 && f.terms().begin()->second.size() == 1) {
    const QScalar c = f.terms().begin()->second.begin()->second;
    return {c, f * c.inverse()};
  }
  return {QScalar(1), f};
}

// T-basis adjoint (pairing int f g) of an action linear in x.
LaurentField adjoint_T(const LaurentField& action) {
  const LaurentField x = BracketKernel::placeholder();
  LaurentField out;
  for (const auto& [key, cof] : action.linear_in('x')) {
    const Proj p = projector_of(key);
    if (p == Proj::None) {
      if (key.euler != 0)
        throw DomainError(ErrorKind::NotInDomain, "kernel term is not a difference operator");
      out += shift(cof * x, -key.shift);
      continue;
    }
    // int f c p(N tau^a g) = int tau^-a(N p*(c f)) g
    const auto [a, rest] = split_content(content_of(key));
    out += shift(rest * project(cof * x, adjoint_proj(p)), -a);
  }
  return out;
}

std::string signed_join(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::string& t = parts[k];
    const bool neg = !t.empty() && t[0] == '-';
    if (k == 0)
      out += t;
    else
      out += neg ? " - " + t.substr(1) : " + " + t;
  }
  return out;
}

bool is_one(const LaurentField& f) { return f == LaurentField(1); }

// Field value on the support of delta(q^a z / w): a coordinate shifted by a
// is read at w.
std::string field_zw(const LaurentField& f, int a) {
  std::vector<std::string> parts;
  for (const auto& [m, poly] : f.terms())
    for (const auto& [k, c] : poly) {
      std::vector<std::string> factors;
      if (!(c == QScalar(1))) {
        const std::string cs = c.str();
        factors.push_back(cs.find_first_of("+-/", 1) != std::string::npos ? "(" + cs + ")" : cs);
      }
      if (k != 0) factors.push_back("z^" + std::to_string(k));
      for (const auto& vp : m) {
        std::string v;
        if (a != 0 && vp.var.shift == a && !vp.var.atom && vp.var.euler == 0 && vp.var.proj == Proj::None)
          v = std::string(1, vp.var.name) + std::to_string(vp.var.index) + "(w)";
        else
          v = vp.var.str() + "(z)";
        if (vp.exponent != 1) v += "^" + std::to_string(vp.exponent);
        factors.push_back(v);
      }
      std::string term;
      for (std::size_t t = 0; t < factors.size(); ++t) term += (t ? "*" : "") + factors[t];
      parts.push_back(term.empty() ? "1" : term);
    }
  if (parts.size() == 1) return parts[0];
  std::string out;
  for (std::size_t t = 0; t < parts.size(); ++t) out += (t ? "+" : "") + parts[t];
  return "(" + out + ")";
}

std::string delta_arg(int a) {
  if (a == 0) return "delta(z/w)";
  if (a > 0) return a == 1 ? "delta(q*z/w)" : "delta(q^" + std::to_string(a) + "*z/w)";
  return a == -1 ? "delta(z/(q*w))" : "delta(z/(q^" + std::to_string(-a) + "*w))";
}

}  // namespace

std::string KernelTerm::str() const {
  std::vector<std::string> f;
  const std::string cs = c.str();
  bool neg = false;
  if (c == QScalar(-1)) neg = true;
  else if (!(c == QScalar(1)))
    f.push_back(cs.find_first_of("+-/", 1) != std::string::npos ? "(" + cs + ")" : cs);
  if (!is_one(left)) {
    const std::string ls = left.str();
    f.push_back(ls.find_first_of("+-", 1) != std::string::npos ? "(" + ls + ")" : ls);
  }
  std::vector<std::string> inner;
  if (a != 0) inner.push_back("T^" + std::to_string(a));
  if (b != 0) inner.push_back("D^" + std::to_string(b));
  if (!is_one(right)) {
    const std::string rs = right.str();
    inner.push_back(rs.find_first_of("+-", 1) != std::string::npos ? "(" + rs + ")" : rs);
  }
  std::string in;
  for (std::size_t k = 0; k < inner.size(); ++k) in += (k ? "*" : "") + inner[k];
  if (proj != Proj::None)
    f.push_back(std::string(proj == Proj::Plus ? "p+(" : proj == Proj::Zero ? "p0(" : "p-(") +
                (in.empty() ? "1" : in) + ")");
  else if (!in.empty())
    f.push_back(in);
  std::string out;
  for (std::size_t k = 0; k < f.size(); ++k) out += (k ? "*" : "") + f[k];
  if (out.empty()) out = "1";
  return neg ? "-" + out : out;
}

BracketKernel::BracketKernel(Basis basis, int i, int j, LaurentField action)
    : basis_(basis), i_(i), j_(j), action_(std::move(action)) {}

std::vector<KernelTerm> BracketKernel::terms() const {
  // beta p+(E) + beta p0(E) reads better as beta E - beta p-(E)
  LaurentField plain;
  std::map<LaurentField, std::map<Proj, LaurentField>> groups;
  for (const auto& [key, cof] : action_.linear_in('x')) {
    const Proj p = projector_of(key);
    if (p == Proj::None)
      plain += cof * LaurentField::var(key);
    else
      groups[content_of(key)][p] += cof;
  }
  std::vector<std::tuple<Proj, LaurentField, LaurentField>> projected;
  for (auto& [content, by] : groups) {
    const LaurentField beta = by[Proj::Plus];
    if (!beta.is_zero() && beta == by[Proj::Zero]) {
      plain += beta * content;
      projected.emplace_back(Proj::Minus, content, -beta);
      by.erase(Proj::Plus);
      by.erase(Proj::Zero);
    }
    for (const auto& [p, cof] : by)
      if (!cof.is_zero()) projected.emplace_back(p, content, cof);
  }
  std::vector<KernelTerm> out;
  for (const auto& [key, cof] : plain.linear_in('x')) {
    KernelTerm t;
    std::tie(t.c, t.left) = split_scalar(cof);
    t.a = key.shift;
    out.push_back(std::move(t));
  }
  for (const auto& [p, content, cof] : projected) {
    KernelTerm t;
    std::tie(t.c, t.left) = split_scalar(cof);
    const auto [a, rest] = split_content(content);
    t.a = a;
    t.right = shift(rest, -a);
    t.proj = p;
    out.push_back(std::move(t));
  }
  std::stable_sort(out.begin(), out.end(), [](const KernelTerm& x, const KernelTerm& y) {
    return std::make_tuple(-x.a, -x.b, static_cast<int>(x.proj), x.left.str(), x.right.str()) <
           std::make_tuple(-y.a, -y.b, static_cast<int>(y.proj), y.left.str(), y.right.str());
  });
  return out;
}

LaurentField BracketKernel::apply(const LaurentField& f) const {
  return action_.substitute('x', [&](int) { return f; });
}

BracketKernel BracketKernel::substitute(char name,
                                        const std::function<LaurentField(int)>& values) const {
  return BracketKernel(basis_, i_, j_, action_.substitute(name, values));
}

std::string BracketKernel::str() const {
  std::vector<std::string> parts;
  for (const auto& t : terms()) parts.push_back(t.str());
  return signed_join(parts);
}

std::string BracketKernel::delta_str() const {
  const char f = basis_ == Basis::T ? 't' : 'u';
  std::string head = "{" + std::string(1, f) + std::to_string(i_) + "(z)," + std::string(1, f) +
                     std::to_string(j_) + "(w)} = ";
  std::vector<std::string> parts;
  for (const auto& t : terms()) {
    if (t.proj != Proj::None || t.b != 0 || !is_one(t.right)) {
      KernelTerm neg = t;
      neg.c = -neg.c;
      parts.push_back(neg.str() + "*" + delta_arg(0));
      continue;
    }
    const QScalar c = -t.c;
    std::string body = field_zw(t.left, t.a) + "*" + delta_arg(t.a);
    if (c == QScalar(-1))
      body = "-" + body;
    else if (!(c == QScalar(1))) {
      const std::string cs = c.str();
      body = (cs.find_first_of("+-/", 1) != std::string::npos ? "(" + cs + ")" : cs) + "*" + body;
    }
    parts.push_back(body);
  }
  return head + signed_join(parts);
}

BracketKernel operator*(const QScalar& s, const BracketKernel& k) {
  return BracketKernel(k.basis(), k.i(), k.j(), k.action() * s);
}

BracketKernel adjoint(const BracketKernel& k) {
  if (k.basis() == Basis::T) return BracketKernel(Basis::T, k.j(), k.i(), adjoint_T(k.action()));
  // int_{-1} f g = int (z f) g, so K* = z^-1 K*_T z
  const LaurentField zx = LaurentField::z(1) * BracketKernel::placeholder();
  const LaurentField conj = adjoint_T(k.action()).substitute('x', [&](int) { return zx; });
  return BracketKernel(Basis::D, k.j(), k.i(), conj.times_z(-1));
}

BracketKernel kernel(int s, Splitting sigma, const PhaseWindow& w, int i, int j) {
  if (!w.has_index(i) || !w.has_index(j))
    throw DomainError(ErrorKind::NotInDomain, "kernel index outside the window " + w.str());
  using Key = std::tuple<int, int, int, int, int, bool, int, int>;
  static std::mutex mu;
  static std::map<Key, BracketKernel> cache;
  const Key key{s, sigma.sigma, static_cast<int>(w.basis), w.n, w.m.value_or(0), w.m.has_value(), i, j};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  check_window(s, sigma, w);
  PhaseWindow eff = w;
  if (w.basis == Basis::T && !w.m) {
    // fields below min(i, j, i + j - n) do not reach the entry
    if (s == 3) throw DomainError(ErrorKind::NotInDomain, "cubic kernels on infinite windows");
    eff.m = std::min({i, j, i + j - w.n}) - 1;
  }
  const int r = eff.order_of(i);
  const OneForm X = OneForm::single(eff, j, BracketKernel::placeholder());
  BracketKernel result;
  if (eff.basis == Basis::T) {
    const Symbol J = jmap(s, sigma, eff.formal_lax(), X.to_symbol());
    result = BracketKernel(Basis::T, i, j, J.raw_coeff(r));
  } else {
    bool done = false;
    for (int depth = 4; depth <= 64 && !done; depth *= 2) {
      // products lose the orders of L and X in precision
      const int floor = std::min(r, 0) - depth - std::max(0, j - w.n - 1) - std::max(0, w.n);
      const Symbol J = jmap(s, sigma, eff.formal_lax(floor), X.to_symbol(floor));
      if (J.exact() || J.floor() <= r) {
        result = BracketKernel(Basis::D, i, j, J.raw_coeff(r));
        done = true;
      }
    }
    if (!done) throw DomainError(ErrorKind::FloorTooHigh, "kernel entry needs a deeper expansion");
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, result);
  return result;
}

// ---------------------------------------------------------------- closed forms

namespace {

[[noreturn]] void out_of_formula(const std::string& what) {
  throw DomainError(ErrorKind::IndexOutOfFormula, what);
}

QScalar qp(long e) { return QScalar::qpow(e); }
QScalar qb(long m, long k) { return qbinomial(m, k); }
QScalar sgn(int k) { return QScalar(k % 2 == 0 ? 1 : -1); }
QScalar qm1() { return QScalar::q() - QScalar(1); }
LaurentField zf() { return LaurentField::z(1); }
LaurentField Tp(int a, const LaurentField& f) { return shift(f, a); }
LaurentField Dp(int b, const LaurentField& f) {
  if (b < 0) out_of_formula("negative q-derivative power in a closed form");
  return qderive(f, b);
}

// Field coordinate of the window, zero outside it.
struct Fields {
  const PhaseWindow& w;
  LaurentField operator()(int i) const {
    return w.has_index(i) ? fvar(w.field(), i) : LaurentField();
  }
};

// t_{i+j} T^i - T^-j t_{i+j}
LaurentField linear_T(const Fields& t, int i, int j) {
  const LaurentField x = BracketKernel::placeholder();
  return t(i + j) * Tp(i, x) - Tp(-j, t(i + j) * x);
}

// 2 sum_k (t_k T^(k-j) t_{i+j-k} - t_{i+j-k} T^(i-k) t_k)
LaurentField quadratic_sum_T(const Fields& t, int i, int j) {
  const PhaseWindow& w = t.w;
  const LaurentField x = BracketKernel::placeholder();
  LaurentField out;
  for (int k = std::max(*w.m, i + j - w.n); k <= std::min(w.n, i); ++k)
    out += t(k) * Tp(k - j, t(i + j - k) * x) - t(i + j - k) * Tp(i - k, t(k) * x);
  return out * QScalar(2);
}

LaurentField linear_D_block(const Fields& u, int n, int i, int j) {
  const LaurentField x = BracketKernel::placeholder();
  const LaurentField z = zf();
  LaurentField out;
  for (int k = 0; k <= i + j - n; ++k) {
    const QScalar c = qb(i - n - 1, k) * qp(k * (k + 1) / 2) * sgn(k);
    out += c * qp(n - i - 1) * qm1() * u(i + j - n - k) * Dp(k, z * Tp(n - i, x));
    out += c * qp(-1) * u(i + j - n - k - 1) * Dp(k, Tp(n - i, x));
  }
  for (int k = 0; k <= i + j - n; ++k)
    out -= qb(j - n, k) * qm1() * qp(-1) * Tp(j - n - k, Dp(k, u(i + j - n - k) * z * x));
  for (int k = 0; k <= i + j - n - 1; ++k)
    out -= qb(j - n - 1, k) * qp(-1) * Tp(j - n - k - 1, Dp(k, u(i + j - n - k - 1) * x));
  return out;
}

LaurentField linear_D_column(const Fields& u, int n, int i, bool theta_at_n) {
  const LaurentField x = BracketKernel::placeholder();
  const LaurentField z = zf();
  LaurentField out;
  if (i >= n + 1) {
    for (int k = 0; k <= i - n - 1; ++k)
      out += qb(i - n - 1, k) * qp(k * (k + 1) / 2 + n - i - 1) * qm1() * sgn(k) * u(i - k) *
             Dp(k, z * Tp(n - i, x));
    out -= qp(-1) * qm1() * z * u(i) * x;
  }
  if (i <= n && (theta_at_n || i != n)) {
    for (int k = 0; k <= i - 1; ++k) {
      const QScalar c = qb(i - n - 1, k) * qp(k * (k + 1) / 2) * sgn(k);
      out -= c * qp(n - i - 1) * qm1() * u(i - k) * Dp(k, z * x);
      out -= c * qp(-1) * u(i - k - 1) * Dp(k, x);
    }
    out += qm1() * qp(-1) * z * u(i) * x;
    for (int k = 0; k <= i - 1; ++k)
      out += qb(-1, k) * qp(-1) * Tp(-k - 1, Dp(k, u(i - k - 1) * x));
  }
  if (i == n) {
    LaurentField inner = u(n) * x;
    for (int k = 0; k <= n; ++k) inner -= qb(-1, k) * Tp(-k, Dp(k, u(n - k) * x));
    out += z * qm1() * qp(-1) * inner;
  }
  return out;
}

LaurentField quadratic_D(const Fields& u, int n, int i, int j) {
  const LaurentField x = BracketKernel::placeholder();
  const LaurentField z = zf();
  LaurentField out;
  for (int k = 0; k <= i - 1; ++k)
    for (int l = 0; l <= k; ++l)
      out += QScalar(2) * qb(l - k - 1, l) * qp((l - 1) * (k + 1)) * u(j + k - l) *
             Dp(l, Tp(-k, u(i - k - 1) * x));
  for (int k = 0; k <= i - 1; ++k)
    for (int l = 0; l <= j + k; ++l)
      for (int m = 0; m <= i - k - 1; ++m)
        out -= QScalar(2) * qb(j - n - 1, l) * qb(n - m, i - k - m - 1) *
               qp((l - 1) * (l - j + n + 1) + (i + l - k - m - 2) * (i - k - n - 1)) * u(m) *
               Dp(i + l - k - m - 1, Tp(j + k - i - l + 1, u(j + k - l) * x));
  for (int k = 0; k <= i; ++k)
    for (int l = 0; l <= k; ++l)
      out += QScalar(2) * qb(l - k - 1, l) * qp((l - 1) * (k + 1)) * qm1() * z * u(j + k - l) *
             Dp(l, Tp(-k, u(i - k) * x));
  for (int k = 0; k <= i; ++k)
    for (int l = 0; l <= j + k; ++l)
      for (int m = 0; m <= i - k; ++m)
        out -= QScalar(2) * qb(j - n - 1, l) * qb(n - m, i - k - m) *
               qp((l - 1) * (l - j + n + 1) + (i + l - k - m - 1) * (i - k - n)) * qm1() * z *
               u(m) * Dp(i + l - k - m, Tp(j + k - i - l, u(j + k - l) * x));
  out -= (QScalar(1) - qp(-1)) * z * u(i) * u(j) * x;
  for (int k = 0; k <= i; ++k)
    for (int l = 0; l <= j; ++l)
      out += qb(j - n - 1, l) * qb(n - k, i - k) *
             qp((l - 1) * (l - j + n + 1) + (i + l - k - 1) * (i - n)) * qm1() * z * u(k) *
             Dp(i + l - k, Tp(j - i - l, u(j - l) * x));
  for (int k = 0; k <= i - 1; ++k)
    for (int l = 0; l <= j; ++l)
      out += qb(j - n - 1, l) * qb(n - k, i - k - 1) *
             qp((l - 1) * (l - j + n + 1) + (i + l - k - 1) * (i - n - 1)) *
             (qp(n - i + 1) - QScalar(1)) * u(k) * Dp(i + l - k - 1, Tp(j - i - l + 1, u(j - l) * x));
  for (int k = 0; k <= i; ++k)
    out += qb(n - k, i - k) * qp((i - k) * (i - n)) * (QScalar(1) - qp(-1)) * u(k) *
           Dp(i - k, Tp(n - i, z * u(j) * x));
  for (int k = 0; k <= j; ++k)
    out -= qb(j - n - 1, k) * qp((k - 1) * (k - j + n + 1)) * qm1() * z * u(i) *
           Dp(k, Tp(j - k - n, u(j - k) * x));
  return out;
}

LaurentField quadratic_gd1(const Fields& u, int i, int j) {
  const LaurentField x = BracketKernel::placeholder();
  const LaurentField z = zf();
  const LaurentField u0 = u(0);
  const QScalar half_q = QScalar(mpq_class(1, 2)) * qp(-1);
  auto diff = [&](const LaurentField& f, const QScalar& a, const QScalar& b) {
    return u0 * (a * Tp(1, f) - b * Tp(-1, f));
  };
  if (i == 0 && j == 0) return half_q * qm1() * diff(z * u0 * x, 1, 1);
  if (i == 0 && j == 1) return half_q * diff(u0 * x, 1, 1);
  if (i == 1 && j == 0) return half_q * diff(u0 * x, QScalar::q(), qp(-1));
  if (i == 1 && j == 1) return (half_q * qm1().inverse() * diff(u0 * x, 1, 1)).times_z(-1);
  out_of_formula("q-GD1 has indices 0 and 1 only");
}

bool is_gd1(const PhaseWindow& w) { return w.basis == Basis::D && w.n == 1 && w.m && *w.m == 0; }

}  // namespace

std::string closed_form_name(int s, Splitting sigma, const PhaseWindow& w, int i, int j) {
  if (w.basis == Basis::T) {
    if (sigma.sigma == -1) return s == 1 ? "linear-T" : "quadratic-T";
    if (sigma.sigma == 0) {
      if (s == 1) return (i == 0 || j == 0) ? "linear-sigma0-row" : "linear-sigma0";
      return "quadratic-sigma0";
    }
    return "none";
  }
  if (sigma.sigma != -1) return "none";
  if (s == 2) return is_gd1(w) ? "quadratic-gd1" : "quadratic-D";
  if ((i == 0 && j == 0) || (w.n >= 1 && (i == 0 || j == 0))) return "linear-D-zero";
  if (j == w.n || i == w.n) return "linear-D-column";
  return "linear-D-block";
}

BracketKernel kernel_closed_form(int s, Splitting sigma, const PhaseWindow& w, int i, int j) {
  if (!w.has_index(i) || !w.has_index(j)) out_of_formula("index outside the window " + w.str());
  if (s == 3) out_of_formula("no closed form is given for the cubic structure");
  const Fields f{w};
  const LaurentField x = BracketKernel::placeholder();
  auto make = [&](const LaurentField& a) { return BracketKernel(w.basis, i, j, a); };
  if (w.basis == Basis::T) {
    if (!w.m) out_of_formula("closed forms need a finite window");
    if (sigma.sigma == -1) {
      if (s == 1) {
        if (i >= 1 && j >= 1 && w.n >= i + j) return make(linear_T(f, i, j));
        // "up to a sign" for the non-positive block
        if (i <= 0 && j <= 0 && i + j >= *w.m) return make(-linear_T(f, i, j));
        return make(LaurentField());
      }
      // t_i (1 + T^i)(1 - T^-j) t_j
      const LaurentField inner = f(j) * x;
      const LaurentField diff = inner - Tp(-j, inner);  // (1 - T^-j) t_j x
      return make(quadratic_sum_T(f, i, j) + f(i) * (diff + Tp(i, diff)));
    }
    if (sigma.sigma == 0) {
      if (s == 1) {
        if (i >= 1 && j >= 1 && w.n >= i + j) return make(-linear_T(f, i, j));
        if (i <= -1 && j <= -1 && i + j >= *w.m) return make(linear_T(f, i, j));
        if (i == 0) {
          const LaurentField g = Tp(-j, f(j) * x) - f(j) * x;
          if (j >= 1) return make(-project(g, Proj::Plus));
          if (j <= -1) return make(project(g, Proj::Minus));
          return make(LaurentField());
        }
        if (j == 0) {
          const BracketKernel k0i = kernel_closed_form(s, sigma, w, 0, i);
          return make(-adjoint(k0i).action());
        }
        return make(LaurentField());
      }
      const LaurentField pm = project(f(j) * x, Proj::Minus);
      return make(quadratic_sum_T(f, i, j) + QScalar(2) * f(i) * (pm - Tp(i - j, pm)));
    }
    out_of_formula("the sigma = +1 kernels are not printed");
  }
  if (sigma.sigma != -1) out_of_formula("D-basis kernels are printed for sigma = -1 only");
  const int n = w.n;
  if (s == 2) {
    if (is_gd1(w)) return make(quadratic_gd1(f, i, j));
    return make(quadratic_D(f, n, i, j));
  }
  if ((i == 0 && j == 0) || (n >= 1 && (i == 0 || j == 0))) return make(LaurentField());
  if (j == n) return make(linear_D_column(f, n, i, true));
  if (i == n) return make(-adjoint(BracketKernel(w.basis, j, i, linear_D_column(f, n, j, true))).action());
  if (i >= n + 1 && j >= n + 1) return make(linear_D_block(f, n, i, j));
  if (i <= n - 1 && j <= n - 1) return make(-linear_D_block(f, n, i, j));
  out_of_formula("mixed index ranges are not covered by the printed J1 kernels");
}

namespace {

const std::vector<QScalar>& kappa_candidates() {
  static const std::vector<QScalar> c = {QScalar(1), QScalar(mpq_class(1, 2)), QScalar(2),
                                         QScalar(mpq_class(1, 4)), QScalar(4)};
  return c;
}

// c with a = c * b among the candidates and their negatives.
std::optional<QScalar> ratio_of(const BracketKernel& a, const BracketKernel& b) {
  if (a == b) return QScalar(1);
  for (const QScalar& c : kappa_candidates())
    for (const QScalar& sc : {c, -c})
      if (a.action() == b.action() * sc) return sc;
  return std::nullopt;
}

}  // namespace

std::optional<QScalar> fit_kappa(const std::vector<std::pair<BracketKernel, BracketKernel>>& pairs) {
  for (const QScalar& c : kappa_candidates()) {
    const bool fits = std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) {
      return p.first.action() == p.second.action() * c;
    });
    if (fits) return c;
  }
  return std::nullopt;
}

ClosedFormReport compare_closed_forms(int s, Splitting sigma, const PhaseWindow& w,
                                      const std::vector<std::pair<int, int>>& entries,
                                      bool fit_constant) {
  ClosedFormReport report;
  struct Entry {
    int i, j;
    BracketKernel closed, computed;
  };
  std::vector<Entry> rows;
  for (const auto& [i, j] : entries) {
    BracketKernel closed;
    try {
      closed = kernel_closed_form(s, sigma, w, i, j);
    } catch (const DomainError& e) {
      if (e.kind() != ErrorKind::IndexOutOfFormula) throw;
      ++report.skipped;
      continue;
    }
    rows.push_back({i, j, closed, kernel(s, sigma, w, i, j)});
  }
  report.compared = static_cast<int>(rows.size());

  QScalar kappa(1);
  if (fit_constant) {
    // the candidate fitting the most entries; ties go to the earlier candidate
    std::size_t best = 0;
    for (const QScalar& c : kappa_candidates()) {
      const auto hits = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const Entry& r) {
        return r.closed.action() == r.computed.action() * c;
      }));
      if (hits > best) {
        best = hits;
        kappa = c;
      }
    }
  }
  bool all = true;
  for (const Entry& r : rows) {
    if (r.closed.action() == r.computed.action() * kappa) continue;
    all = false;
    Erratum e{closed_form_name(s, sigma, w, r.i, r.j), r.i, r.j, r.closed.str(), r.computed.str(), ""};
    if (auto c = ratio_of(r.closed, r.computed)) e.ratio = c->str();
    report.errata.push_back(std::move(e));
  }
  if (all) report.kappa = kappa;
  return report;
}

// ---------------------------------------------------------------- Dirac reduction

ModeOperator::ModeOperator(const BracketKernel& k) {
  if (k.is_zero()) throw DomainError(ErrorKind::NotSecondClass, "J_nn vanishes identically");
  bool first = true;
  for (const auto& [v, coef] : k.action().linear_in('x')) {
    if (v.atom || v.proj != Proj::None || v.euler != 0 || !coef.is_concrete())
      throw DomainError(ErrorKind::NotInDomain, "J_nn is not a concrete difference operator");
    const ZPoly p = coef.zpoly();
    if (p.size() != 1)
      throw DomainError(ErrorKind::NotInDomain, "J_nn is not mode-diagonal: " + k.str());
    const auto& [e, c] = *p.begin();
    if (!first && e != e_)
      throw DomainError(ErrorKind::NotInDomain, "J_nn is not mode-diagonal: " + k.str());
    first = false;
    e_ = e;
    c_[v.shift] += c;
  }
  std::erase_if(c_, [](const auto& t) { return t.second.is_zero(); });
  if (c_.empty()) throw DomainError(ErrorKind::NotSecondClass, "J_nn vanishes identically");
}

QScalar ModeOperator::factor(int k) const {
  QScalar f;
  for (const auto& [a, c] : c_) f += c * QScalar::qpow(static_cast<long>(a) * k);
  return f;
}

LaurentField ModeOperator::apply(const LaurentField& f) const {
  if (!f.is_concrete()) throw DomainError(ErrorKind::NotInDomain, "mode operators act on concrete fields");
  LaurentField out;
  for (const auto& [k, c] : f.zpoly()) out += LaurentField::monomial(c * factor(k), k + e_);
  return out;
}

LaurentField ModeOperator::apply_inverse(const LaurentField& f) const {
  if (!f.is_concrete()) throw DomainError(ErrorKind::NotInDomain, "mode operators act on concrete fields");
  LaurentField out;
  for (const auto& [k, c] : f.zpoly()) {
    const QScalar d = factor(k - e_);
    if (d.is_zero())
      throw DomainError(ErrorKind::SingularMode, "mode z^" + std::to_string(k) + " is annihilated by J_nn");
    out += LaurentField::monomial(c / d, k - e_);
  }
  return out;
}

std::string ModeOperator::str() const {
  LaurentField rendered;
  for (const auto& [a, c] : c_) rendered += c * LaurentField::var('x', 0, a);
  std::string inner = BracketKernel(Basis::T, 0, 0, rendered).str();
  if (e_ == 0) return inner;
  return "z^" + std::to_string(e_) + "*(" + inner + ")";
}

LaurentField ReducedKernel::apply(const LaurentField& f) const {
  LaurentField out = local.apply(f);
  if (inverse) out -= left.apply(inverse->apply_inverse(right.apply(f)));
  return out;
}

std::string ReducedKernel::str() const {
  if (!inverse) return local.str();
  return local.str() + " - (" + left.str() + ") o (" + constraint.str() + ")^-1 o (" + right.str() + ")";
}

std::map<std::pair<int, int>, ReducedKernel> dirac_reduce(
    const std::map<std::pair<int, int>, BracketKernel>& kernels, int n, char field,
    const std::function<LaurentField(int)>& values) {
  auto concrete = [&](int i, int j) {
    const auto it = kernels.find({i, j});
    if (it == kernels.end())
      throw DomainError(ErrorKind::NotInDomain,
                        "missing kernel entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return it->second.substitute(field, values);
  };
  const BracketKernel jnn = concrete(n, n);
  const ModeOperator inverse(jnn);
  std::map<std::pair<int, int>, ReducedKernel> out;
  for (const auto& [ij, k] : kernels) {
    const auto [i, j] = ij;
    if (i == n || j == n) continue;
    out.emplace(ij, ReducedKernel{k.substitute(field, values), jnn, concrete(i, n), concrete(n, j), inverse});
  }
  return out;
}

// ---------------------------------------------------------------- Jacobi and pencil

namespace {

void require_support(const Symbol& V, const PhaseWindow& w, int cutoff, const std::string& what) {
  const int lo = *w.m;
  const int hi = w.n;
  if (!V.exact() && V.floor() >= lo)
    throw DomainError(ErrorKind::SupportEscapesWindow, what + " is not resolved down to the window");
  for (const auto& [r, c] : V.coeffs()) {
    if (c.is_zero()) continue;
    if (!c.is_concrete())
      throw DomainError(ErrorKind::NotInDomain, what + " has formal coefficients");
    if (r < lo || r > hi)
      throw DomainError(ErrorKind::SupportEscapesWindow, what + " leaves the window " + w.str());
    if (c.min_zexp() < -cutoff || c.max_zexp() > cutoff)
      throw DomainError(ErrorKind::SupportEscapesWindow,
                        what + " leaves the mode range [-" + std::to_string(cutoff) + ", " +
                            std::to_string(cutoff) + "]");
  }
}

// Exact for polynomials of degree <= 4 in eps.
QScalar derivative_at_zero(const std::function<QScalar(long)>& f) {
  return (QScalar(8) * (f(1) - f(-1)) - (f(2) - f(-2))) / QScalar(12);
}

}  // namespace

QScalar jacobi_residual(int s, Splitting sigma, const PhaseWindow& w, int mode_cutoff,
                        const Symbol& L, const std::vector<OneForm>& forms) {
  if (forms.size() != 3) throw DomainError(ErrorKind::NotInDomain, "the Jacobi sum takes three functionals");
  if (!w.m) throw DomainError(ErrorKind::NotInDomain, "the Jacobi check needs a finite window");
  check_window(s, sigma, w);
  // D-basis one-forms are series; keep enough terms for every order in the window
  int floor = Symbol::kExact;
  if (w.basis == Basis::D) {
    int top = 0;
    for (const OneForm& f : forms)
      for (const auto& [j, xj] : f.x) top = std::max(top, j - w.n - 1);
    floor = std::min(*w.m, 0) - 8 - std::max(0, w.n) - top;
  }
  require_support(L, w, mode_cutoff, "L");
  std::vector<Symbol> X, V;
  for (const OneForm& f : forms) {
    X.push_back(f.to_symbol(floor));
    const Symbol v = jmap(s, sigma, L, X.back());
    require_support(v, w, mode_cutoff, "a Hamiltonian vector");
    V.push_back(v);
  }
  QScalar residual;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    residual += derivative_at_zero([&](long e) {
      const Symbol Le = L + V[a] * QScalar(e);
      return bracket(s, sigma, Le, X[b], X[c]);
    });
  }
  return residual;
}

std::pair<Symbol, Symbol> pencil_check(int s, Splitting sigma, const Symbol& L, const Symbol& X,
                                       const QScalar& eps) {
  if (s != 2 && s != 3) throw DomainError(ErrorKind::NotInDomain, "pencil relations exist for s = 2, 3");
  const Symbol shifted = L + Symbol::identity(L.basis()) * eps;
  const Symbol lhs = jmap(s, sigma, shifted, X);
  Symbol rhs = jmap(s, sigma, L, X);
  if (s == 2) {
    rhs += jmap(1, sigma, L, X) * (QScalar(2) * eps);
  } else {
    rhs += jmap(2, sigma, L, X) * eps;
    rhs += jmap(1, sigma, L, X) * (eps * eps);
  }
  return {lhs, rhs};
}

}  // namespace qsym
