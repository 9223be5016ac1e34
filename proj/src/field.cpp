#include "qsym/field.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "qsym/errors.hpp"

namespace qsym {

std::strong_ordering operator<=>(const FieldVar& a, const FieldVar& b) {
  if (auto c = std::tie(a.name, a.index, a.shift, a.euler, a.proj) <=>
               std::tie(b.name, b.index, b.shift, b.euler, b.proj);
      c != 0)
    return c;
  if (!a.atom || !b.atom) return static_cast<bool>(a.atom) <=> static_cast<bool>(b.atom);
  if (a.atom == b.atom) return std::strong_ordering::equal;
  if (auto c = std::tie(a.atom->proj, a.atom->zexp) <=> std::tie(b.atom->proj, b.atom->zexp); c != 0)
    return c;
  return a.atom->mono <=> b.atom->mono;
}

namespace {

LaurentField mono_field(const VarMono& m, int zexp = 0) {
  LaurentField r = LaurentField::z(zexp);
  for (const auto& vp : m)
    for (int e = 0; e < vp.exponent; ++e) r = r * LaurentField::var(vp.var);
  return r;
}

LaurentField atom_content(const ProjAtom& a) { return mono_field(a.mono, a.zexp); }

}  // namespace

std::string FieldVar::str() const {
  if (atom) {
    LaurentField body = atom_content(*atom);
    return std::string(atom->proj == Proj::Plus ? "p+(" : atom->proj == Proj::Zero ? "p0(" : "p-(") +
           body.str() + ")";
  }
  std::string s = std::string(1, name) + std::to_string(index);
  if (shift != 0) s = "tau^" + std::to_string(shift) + "(" + s + ")";
  for (int e = 0; e < euler; ++e) s = "E(" + s + ")";
  if (proj == Proj::Plus) s = "p+(" + s + ")";
  if (proj == Proj::Minus) s = "p-(" + s + ")";
  if (proj == Proj::Zero) s = "p0(" + s + ")";
  return s;
}

Proj projector_of(const FieldVar& v) { return v.atom ? v.atom->proj : v.proj; }

LaurentField content_of(const FieldVar& v) {
  if (v.atom) return atom_content(*v.atom);
  FieldVar w = v;
  w.proj = Proj::None;
  return LaurentField::var(w);
}

namespace {

VarMono mul_mono(const VarMono& a, const VarMono& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  VarMono r;
  r.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->var < j->var)) {
      r.push_back(*i++);
    } else if (i == a.end() || j->var < i->var) {
      r.push_back(*j++);
    } else {
      r.push_back({i->var, i->exponent + j->exponent});
      ++i;
      ++j;
    }
  }
  return r;
}

ZPoly mul_zpoly(const ZPoly& a, const ZPoly& b) {
  ZPoly r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      QScalar& slot = r[ka + kb];
      slot += ca * cb;
    }
  std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

}  // namespace

LaurentField::LaurentField(const QScalar& c) {
  if (!c.is_zero()) terms_[{}][0] = c;
}

LaurentField::LaurentField(long c) : LaurentField(QScalar(c)) {}

LaurentField LaurentField::monomial(const QScalar& c, int zexp) {
  LaurentField f;
  if (!c.is_zero()) f.terms_[{}][zexp] = c;
  return f;
}

LaurentField LaurentField::var(char name, int index, int shift) {
  return var(FieldVar{name, index, shift, 0, Proj::None, nullptr});
}

LaurentField LaurentField::var(const FieldVar& v) {
  LaurentField f;
  f.terms_[VarMono{{v, 1}}][0] = QScalar(1);
  return f;
}

LaurentField LaurentField::from_zpoly(const ZPoly& p) {
  LaurentField f;
  for (const auto& [k, c] : p)
    if (!c.is_zero()) f.terms_[{}][k] = c;
  return f;
}

bool LaurentField::is_concrete() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

ZPoly LaurentField::zpoly() const {
  auto it = terms_.find(VarMono{});
  return it == terms_.end() ? ZPoly{} : it->second;
}

QScalar LaurentField::coeff(int zexp) const {
  auto it = terms_.find(VarMono{});
  if (it == terms_.end()) return {};
  auto jt = it->second.find(zexp);
  return jt == it->second.end() ? QScalar() : jt->second;
}

int LaurentField::min_zexp() const {
  int m = 0;
  bool first = true;
  for (const auto& [mono, p] : terms_) {
    if (p.empty()) continue;
    m = first ? p.begin()->first : std::min(m, p.begin()->first);
    first = false;
  }
  return m;
}

int LaurentField::max_zexp() const {
  int m = 0;
  bool first = true;
  for (const auto& [mono, p] : terms_) {
    if (p.empty()) continue;
    m = first ? p.rbegin()->first : std::max(m, p.rbegin()->first);
    first = false;
  }
  return m;
}

void LaurentField::add_term(const VarMono& m, int zexp, const QScalar& c) {
  if (c.is_zero()) return;
  auto& poly = terms_[m];
  auto [it, inserted] = poly.try_emplace(zexp, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) poly.erase(it);
  }
  if (poly.empty()) terms_.erase(m);
}

LaurentField LaurentField::operator-() const {
  LaurentField r = *this;
  for (auto& [m, p] : r.terms_)
    for (auto& [k, c] : p) c = -c;
  return r;
}

LaurentField& LaurentField::operator+=(const LaurentField& o) {
  for (const auto& [m, p] : o.terms_)
    for (const auto& [k, c] : p) add_term(m, k, c);
  return *this;
}

LaurentField& LaurentField::operator-=(const LaurentField& o) {
  for (const auto& [m, p] : o.terms_)
    for (const auto& [k, c] : p) add_term(m, k, -c);
  return *this;
}

LaurentField& LaurentField::operator*=(const QScalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (s.is_one()) return *this;
  for (auto& [m, p] : terms_)
    for (auto& [k, c] : p) c *= s;
  return *this;
}

LaurentField operator*(const LaurentField& a, const LaurentField& b) {
  LaurentField r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ma, pa] : a.terms_)
    for (const auto& [mb, pb] : b.terms_) {
      VarMono m = mul_mono(ma, mb);
      for (const auto& [k, c] : mul_zpoly(pa, pb)) r.add_term(m, k, c);
    }
  return r;
}

LaurentField LaurentField::times_z(int k) const {
  if (k == 0) return *this;
  LaurentField r;
  for (const auto& [m, p] : terms_) {
    ZPoly& out = r.terms_[m];
    for (const auto& [e, c] : p) out.emplace(e + k, c);
  }
  return r;
}

LaurentField LaurentField::map_coeffs(const std::function<QScalar(const QScalar&)>& fn) const {
  LaurentField r;
  for (const auto& [m, p] : terms_)
    for (const auto& [k, c] : p) r.add_term(m, k, fn(c));
  return r;
}

bool LaurentField::contains(char name) const {
  for (const auto& [m, p] : terms_)
    for (const auto& vp : m) {
      if (vp.var.name == name) return true;
      if (vp.var.atom && atom_content(*vp.var.atom).contains(name)) return true;
    }
  return false;
}

LaurentField LaurentField::substitute(char name,
                                      const std::function<LaurentField(int)>& values) const {
  LaurentField r;
  for (const auto& [m, p] : terms_) {
    VarMono kept;
    LaurentField factor(1);
    for (const auto& vp : m) {
      if (vp.var.atom) {
        LaurentField inner = atom_content(*vp.var.atom);
        if (!inner.contains(name)) {
          kept.push_back(vp);
          continue;
        }
        LaurentField v = project(inner.substitute(name, values), vp.var.atom->proj);
        for (int e = 0; e < vp.exponent; ++e) factor = factor * v;
        continue;
      }
      if (vp.var.name != name) {
        kept.push_back(vp);
        continue;
      }
      LaurentField v = shift(values(vp.var.index), vp.var.shift);
      for (int e = 0; e < vp.var.euler; ++e) v = euler_derive(v);
      v = project(v, vp.var.proj);
      for (int e = 0; e < vp.exponent; ++e) factor = factor * v;
    }
    LaurentField base;
    for (const auto& [k, c] : p) base.add_term(kept, k, c);
    r += base * factor;
  }
  return r;
}

std::map<FieldVar, LaurentField> LaurentField::linear_in(char name) const {
  std::map<FieldVar, LaurentField> out;
  for (const auto& [m, p] : terms_) {
    const FieldVar* found = nullptr;
    VarMono rest;
    for (const auto& vp : m) {
      const bool carries =
          vp.var.name == name || (vp.var.atom && atom_content(*vp.var.atom).contains(name));
      if (carries) {
        if (found != nullptr || vp.exponent != 1)
          throw std::logic_error("linear_in: term is not linear in '" + std::string(1, name) + "'");
        found = &vp.var;
      } else {
        rest.push_back(vp);
      }
    }
    if (found == nullptr)
      throw std::logic_error("linear_in: term independent of '" + std::string(1, name) + "'");
    LaurentField& slot = out[*found];
    for (const auto& [k, c] : p) slot.add_term(rest, k, c);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

std::string LaurentField::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, p] : terms_) {
    for (const auto& [k, c] : p) {
      std::string coeff = c.str();
      bool neg = false;
      if (!coeff.empty() && coeff[0] == '-' && c.is_polynomial() &&
          (-c).str().find_first_of("+-") == std::string::npos) {
        neg = true;
        coeff = (-c).str();
      }
      std::vector<std::string> factors;
      const bool unit = (coeff == "1");
      if (!unit) {
        if (coeff.find_first_of("+-", 1) != std::string::npos ||
            (coeff[0] == '-' && !neg))
          coeff = "(" + coeff + ")";
        factors.push_back(coeff);
      }
      if (k != 0) factors.push_back("z^" + std::to_string(k));
      for (const auto& vp : m) {
        std::string v = vp.var.str();
        if (vp.exponent != 1) v += "^" + std::to_string(vp.exponent);
        factors.push_back(v);
      }
      if (factors.empty()) factors.emplace_back("1");
      std::string term;
      for (std::size_t i = 0; i < factors.size(); ++i) term += (i ? "*" : "") + factors[i];
      if (neg)
        out += "-" + term;
      else
        out += (out.empty() ? "" : "+") + term;
    }
  }
  return out;
}

// ---------------------------------------------------------------- free functions

namespace {

LaurentField shift_var(const FieldVar& v, int beta) {
  if (!v.atom) {
    FieldVar w = v;
    if (w.proj != Proj::Zero) w.shift += beta;
    return LaurentField::var(w);
  }
  return project(shift(atom_content(*v.atom), beta), v.atom->proj);
}

LaurentField euler_var(const FieldVar& v) {
  if (!v.atom) {
    FieldVar w = v;
    w.euler += 1;
    return LaurentField::var(w);
  }
  return project(euler_derive(atom_content(*v.atom)), v.atom->proj);
}

}  // namespace

LaurentField shift(const LaurentField& f, int beta) {
  if (beta == 0) return f;
  LaurentField r;
  for (const auto& [m, p] : f.terms()) {
    ZPoly out;
    for (const auto& [k, c] : p) out.emplace(k, c * QScalar::qpow(static_cast<long>(beta) * k));
    LaurentField piece = LaurentField::from_zpoly(out);
    for (const auto& vp : m) {
      LaurentField sv = shift_var(vp.var, beta);
      for (int e = 0; e < vp.exponent; ++e) piece = piece * sv;
    }
    r += piece;
  }
  return r;
}

LaurentField qderive(const LaurentField& f) {
  if (f.is_concrete()) {
    ZPoly out;
    for (const auto& [k, c] : f.zpoly())
      if (k != 0) out.emplace(k - 1, c * qnum(k));
    return LaurentField::from_zpoly(out);
  }
  static const QScalar inv_qm1 = QScalar(IntPoly(1), IntPoly(std::vector<mpz_class>{-1, 1}));
  return ((shift(f, 1) - f) * inv_qm1).times_z(-1);
}

LaurentField qderive(const LaurentField& f, int times) {
  LaurentField r = f;
  for (int i = 0; i < times && !r.is_zero(); ++i) r = qderive(r);
  return r;
}

LaurentField euler_derive(const LaurentField& f) {
  LaurentField r;
  for (const auto& [m, p] : f.terms()) {
    LaurentField base;
    {
      ZPoly out;
      for (const auto& [k, c] : p)
        if (k != 0) out.emplace(k, c * QScalar(k));
      base = LaurentField::from_zpoly(out);
    }
    LaurentField mono(1);
    for (const auto& vp : m)
      for (int e = 0; e < vp.exponent; ++e) mono = mono * LaurentField::var(vp.var);
    r += base * mono;
    // derivation on the formal factors
    for (std::size_t i = 0; i < m.size(); ++i) {
      LaurentField rest = LaurentField::from_zpoly(p);
      for (std::size_t j = 0; j < m.size(); ++j) {
        int e = m[j].exponent - (i == j ? 1 : 0);
        for (int s = 0; s < e; ++s) rest = rest * LaurentField::var(m[j].var);
      }
      r += rest * euler_var(m[i].var) * QScalar(m[i].exponent);
    }
  }
  return r;
}

QScalar integrate(const LaurentField& f) {
  if (!f.is_concrete())
    throw DomainError(ErrorKind::NotInDomain, "integral of a field with formal coordinates");
  return f.coeff(0);
}

QScalar integrate_m1(const LaurentField& f) { return integrate(f.times_z(1)); }

namespace {

bool keeps_mode(Proj p, int k) {
  return (p == Proj::Plus && k >= 1) || (p == Proj::Minus && k <= -1) || (p == Proj::Zero && k == 0);
}

// p(z^k m) for a nonempty monomial m, in canonical form.
LaurentField project_term(Proj p, int k, const VarMono& m) {
  if (p == Proj::Minus)
    return mono_field(m, k) - project_term(Proj::Plus, k, m) - project_term(Proj::Zero, k, m);
  if (p == Proj::Zero && !m[0].var.atom && m[0].var.shift != 0) {
    // p0 tau^s = p0: unshift the first coordinate
    return project(shift(mono_field(m, k), -m[0].var.shift), Proj::Zero);
  }
  if (m.size() == 1 && m[0].exponent == 1 && k == 0) {
    const FieldVar& v = m[0].var;
    const Proj inner = projector_of(v);
    if (inner == p) return LaurentField::var(v);
    if (inner != Proj::None) return LaurentField();  // distinct projectors annihilate
    FieldVar w = v;
    w.proj = p;
    return LaurentField::var(w);
  }
  FieldVar w;
  w.name = '@';
  w.atom = std::make_shared<const ProjAtom>(ProjAtom{p, k, m});
  return LaurentField::var(w);
}

LaurentField mode_filter(const LaurentField& f, Proj p) {
  LaurentField r;
  for (const auto& [m, poly] : f.terms())
    for (const auto& [k, c] : poly) {
      if (m.empty()) {
        if (keeps_mode(p, k)) r += LaurentField::monomial(c, k);
        continue;
      }
      r += project_term(p, k, m) * c;
    }
  return r;
}

}  // namespace

LaurentField taylor_part(const LaurentField& f) { return mode_filter(f, Proj::Plus); }
LaurentField laurent_part(const LaurentField& f) { return mode_filter(f, Proj::Minus); }

LaurentField constant_part(const LaurentField& f) { return mode_filter(f, Proj::Zero); }

LaurentField project(const LaurentField& f, Proj p) {
  if (p == Proj::None) return f;
  return mode_filter(f, p);
}

LaurentField invert_monomial(const LaurentField& f) {
  const ZPoly p = f.zpoly();
  if (!f.is_concrete() || p.size() != 1)
    throw DomainError(ErrorKind::NotInvertibleLeading,
                      "leading coefficient " + f.str() + " is not a monomial c*z^k");
  return LaurentField::monomial(p.begin()->second.inverse(), -p.begin()->first);
}

}  // namespace qsym
