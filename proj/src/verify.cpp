#include "qsym/verify.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "qsym/errors.hpp"
#include "qsym/hierarchy.hpp"
#include "qsym/logsymbol.hpp"
#include "qsym/rmatrix.hpp"
#include "qsym/sampling.hpp"

namespace qsym {

const char* to_string(CheckResult::Status s) {
  switch (s) {
    case CheckResult::Status::Pass:
      return "pass";
    case CheckResult::Status::Fail:
      return "fail";
    case CheckResult::Status::Error:
      return "error";
  }
  return "?";
}

bool VerifyReport::passed() const { return failures() == 0 && !errored(); }

bool VerifyReport::errored() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.status == CheckResult::Status::Error; });
}

int VerifyReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [](const CheckResult& c) { return c.status == CheckResult::Status::Fail; }));
}

namespace {

const Splitting kMinus{-1};
const QScalar kQuarter(mpq_class(1, 4));
const QScalar kHalf(mpq_class(1, 2));

// Outcome of one check: failures are counted with the first offending case.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    ++total_;
    if (!ok && first_.empty()) first_ = what;
    if (!ok) ++bad_;
  }
  bool ok() const { return bad_ == 0; }
  std::string detail() const {
    std::ostringstream os;
    os << (total_ - bad_) << "/" << total_ << " cases";
    if (!first_.empty()) os << "; first failure: " << first_;
    return os.str();
  }

 private:
  int total_ = 0;
  int bad_ = 0;
  std::string first_;
};

struct Context {
  Sampler& rng;
  Tally& tally;
  std::vector<ErrataEntry>& errata;
  std::string suite;

  void erratum(const std::string& where, const Erratum& e) { errata.push_back({suite, where, e}); }
};

struct Check {
  std::string suite;
  std::string name;
  std::function<void(Context&)> run;
};

// ---------------------------------------------------------------- algebra

Symbol exact(Sampler& r, Basis b, int lo, int hi) { return r.symbol(b, lo, hi).with_floor(Symbol::kExact); }

// No constant order-0 mode, as sigma = 0 needs.
Symbol without_constant_mode(Symbol a) {
  if (a.basis() == Basis::T) {
    const LaurentField c = a.raw_coeff(0);
    a.set(0, c - constant_part(c));
    return a;
  }
  return a - Symbol::function(Basis::D, constant_part(t0_from_D(a)));
}

void algebra_checks(std::vector<Check>& out) {
  out.push_back({"algebra", "associativity T", [](Context& c) {
                   for (int t = 0; t < 30; ++t) {
                     const Symbol a = exact(c.rng, Basis::T, -2, 2), b = exact(c.rng, Basis::T, -2, 2),
                                  d = exact(c.rng, Basis::T, -2, 2);
                     c.tally.require((mul(mul(a, b), d) - mul(a, mul(b, d))).is_zero(), a.str());
                   }
                 }});
  out.push_back({"algebra", "associativity D", [](Context& c) {
                   for (int t = 0; t < 30; ++t) {
                     const Symbol a = c.rng.symbol(Basis::D, -2, 1, -6), b = c.rng.symbol(Basis::D, -2, 1, -6),
                                  d = c.rng.symbol(Basis::D, -2, 1, -6);
                     c.tally.require(mul(mul(a, b), d).equals_on_window(mul(a, mul(b, d))), a.str());
                   }
                 }});
  out.push_back({"algebra", "unit", [](Context& c) {
                   for (Basis b : {Basis::T, Basis::D}) {
                     const Symbol one = Symbol::identity(b);
                     for (int t = 0; t < 10; ++t) {
                       const Symbol a = c.rng.symbol(b, -2, 2, -5);
                       c.tally.require(mul(one, a).equals_on_window(a) && mul(a, one).equals_on_window(a), a.str());
                     }
                   }
                 }});
  out.push_back({"algebra", "q-Leibniz product equals symbol calculus", [](Context& c) {
                   for (int t = 0; t < 30; ++t) {
                     const Symbol a = c.rng.symbol(Basis::D, -2, 2, -5), b = c.rng.symbol(Basis::D, -2, 2, -5);
                     c.tally.require(mul(a, b).equals_on_window(mul_symbolcalc(a, b)), a.str() + " ; " + b.str());
                   }
                 }});
  out.push_back({"algebra", "inverse q-derivative", [](Context& c) {
                   const Symbol d = Symbol::monomial(Basis::D, LaurentField(1), 1);
                   const Symbol dinv = Symbol::monomial(Basis::D, LaurentField(1), -1);
                   for (int k = -3; k <= 3; ++k) {
                     const Symbol u = Symbol::function(Basis::D, LaurentField::z(k) * c.rng.nonzero_scalar());
                     const Symbol left = mul(dinv, mul(d, u), -6);
                     const Symbol right = mul(d, mul(dinv, u, -7), -6);
                     c.tally.require(left.equals_on_window(u) && right.equals_on_window(u), u.str());
                   }
                 }});
  out.push_back({"algebra", "basis conversion is a homomorphism", [](Context& c) {
                   for (int t = 0; t < 10; ++t) {
                     const Symbol a = exact(c.rng, Basis::T, 0, 2), b = exact(c.rng, Basis::T, 0, 2);
                     const Symbol lhs = convert(mul(a, b), Basis::D, -6);
                     const Symbol rhs = mul(convert(a, Basis::D, -6), convert(b, Basis::D, -6));
                     c.tally.require(lhs.equals_on_window(rhs), a.str() + " ; " + b.str());
                   }
                 }});
}

// ---------------------------------------------------------------- trace

void trace_checks(std::vector<Check>& out) {
  out.push_back({"trace", "trace symmetry", [](Context& c) {
                   for (int t = 0; t < 20; ++t) {
                     const Symbol a = exact(c.rng, Basis::T, -2, 2), b = exact(c.rng, Basis::T, -2, 2);
                     c.tally.require(trace(mul(a, b)) == trace(mul(b, a)), a.str());
                     const Symbol ad = c.rng.symbol(Basis::D, -3, 2, -7), bd = c.rng.symbol(Basis::D, -3, 2, -7);
                     c.tally.require(trace(mul(ad, bd)) == trace(mul(bd, ad)), ad.str());
                   }
                 }});
  out.push_back({"trace", "ad-invariance", [](Context& c) {
                   for (int t = 0; t < 20; ++t) {
                     const Symbol a = exact(c.rng, Basis::T, -2, 2), b = exact(c.rng, Basis::T, -2, 2),
                                  d = exact(c.rng, Basis::T, -2, 2);
                     c.tally.require(pairing(commutator(a, b), d) == pairing(a, commutator(b, d)), a.str());
                   }
                 }});
  out.push_back({"trace", "pairing through the D-basis residue", [](Context& c) {
                   for (int t = 0; t < 20; ++t) {
                     const Symbol a = exact(c.rng, Basis::T, -2, 2), b = exact(c.rng, Basis::T, -2, 2);
                     c.tally.require(pairing(a, b) == pairing_via_D(a, b), a.str() + " ; " + b.str());
                   }
                 }});
  out.push_back({"trace", "sigma = 0 sides are isotropic", [](Context& c) {
                   for (int t = 0; t < 10; ++t) {
                     const Symbol a = without_constant_mode(exact(c.rng, Basis::T, -2, 2));
                     const Symbol b = without_constant_mode(exact(c.rng, Basis::T, -2, 2));
                     for (Side s : {Side::Plus, Side::Minus})
                       c.tally.require(pairing(project(a, s, {0}), project(b, s, {0})).is_zero(), a.str());
                   }
                 }});
}

// ---------------------------------------------------------------- myb

void myb_checks(std::vector<Check>& out) {
  for (int sigma : {-1, 0, 1}) {
    out.push_back({"myb", "R solves mYB, sigma = " + std::to_string(sigma), [sigma](Context& c) {
                     const bool zero = sigma == 0;
                     for (int t = 0; t < 8; ++t) {
                       Symbol a = exact(c.rng, Basis::T, -2, 2), b = exact(c.rng, Basis::T, -2, 2);
                       if (zero) a = without_constant_mode(a), b = without_constant_mode(b);
                       c.tally.require(myb_residual(LinearMap::r({sigma}), kQuarter, a, b).is_zero(), "T " + a.str());
                       Symbol ad = c.rng.symbol(Basis::D, -2, 2, -5), bd = c.rng.symbol(Basis::D, -2, 2, -5);
                       if (zero) ad = without_constant_mode(ad), bd = without_constant_mode(bd);
                       c.tally.require(myb_residual(LinearMap::r({sigma}), kQuarter, ad, bd).is_zero(), "D " + ad.str());
                     }
                   }});
  }
  out.push_back({"myb", "antisymmetric part solves mYB", [](Context& c) {
                   const LinearMap corrected = LinearMap::of([](const Symbol& x) {
                     return r_apply(kMinus, x) - kHalf * Symbol::function(Basis::D, t0_from_D(x));
                   });
                   for (int t = 0; t < 8; ++t) {
                     const Symbol a = exact(c.rng, Basis::T, -2, 2), b = exact(c.rng, Basis::T, -2, 2);
                     c.tally.require(myb_residual(LinearMap::rantisym(kMinus), kQuarter, a, b).is_zero(), a.str());
                     const Symbol ad = c.rng.symbol(Basis::D, -2, 2, -5), bd = c.rng.symbol(Basis::D, -2, 2, -5);
                     c.tally.require(corrected(ad).equals_on_window(LinearMap::rantisym(kMinus)(ad)), ad.str());
                     c.tally.require(myb_residual(corrected, kQuarter, ad, bd).is_zero(), ad.str());
                   }
                 }});
  out.push_back({"myb", "R* is the pairing adjoint of R", [](Context& c) {
                   for (int sigma : {-1, 0, 1}) {
                     for (int t = 0; t < 5; ++t) {
                       Symbol a = exact(c.rng, Basis::T, -2, 2), b = exact(c.rng, Basis::T, -2, 2);
                       if (sigma == 0) a = without_constant_mode(a), b = without_constant_mode(b);
                       c.tally.require(pairing(r_apply({sigma}, a), b) == pairing(a, rstar_apply({sigma}, b)), a.str());
                     }
                   }
                 }});
}

// ---------------------------------------------------------------- kernels

std::vector<std::pair<int, int>> square(const std::vector<int>& idx) {
  std::vector<std::pair<int, int>> out;
  for (int i : idx)
    for (int j : idx) out.emplace_back(i, j);
  return out;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

std::string where(int s, Splitting sigma, const PhaseWindow& w) {
  return "s=" + std::to_string(s) + " sigma=" + std::to_string(sigma.sigma) + " " + w.str();
}

// Closed forms against the map: the map is taken as truth, every mismatch is
// reported, and the check asserts the set of mismatches is the known one.
void closed_form_check(Context& c, int s, Splitting sigma, const PhaseWindow& w,
                       const std::vector<std::pair<int, int>>& entries, bool fit,
                       const std::function<bool(const Erratum&)>& known, std::optional<QScalar> kappa,
                       int skipped = 0) {
  const ClosedFormReport r = compare_closed_forms(s, sigma, w, entries, fit);
  const std::string at = where(s, sigma, w);
  for (const Erratum& e : r.errata) {
    c.erratum(at, e);
    c.tally.require(known(e), at + " unexpected mismatch at (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")");
  }
  c.tally.require(r.compared + r.skipped == static_cast<int>(entries.size()) && r.skipped == skipped,
                  at + " skipped " + std::to_string(r.skipped));
  if (kappa) c.tally.require(r.kappa == kappa, at + " kappa " + (r.kappa ? r.kappa->str() : std::string("none")));
}

void kernel_checks(std::vector<Check>& out) {
  const auto none = [](const Erratum&) { return false; };
  const auto sign = [](const Erratum& e) { return e.ratio == "-1"; };
  out.push_back({"kernels", "first structure, T basis", [=](Context& c) {
                   for (const PhaseWindow& w : {PhaseWindow::T(2, 0), PhaseWindow::T(3, -3)})
                     closed_form_check(c, 1, kMinus, w, square(w.indices()), false, sign, std::nullopt);
                   const PhaseWindow w = PhaseWindow::T(2, -2);
                   closed_form_check(c, 1, {0}, w, square(w.indices()), false,
                                     [](const Erratum& e) { return e.ratio == "-1" && (e.i == 0 || e.j == 0); },
                                     std::nullopt);
                 }});
  out.push_back({"kernels", "quadratic structure, T basis", [=](Context& c) {
                   for (const PhaseWindow& w : {PhaseWindow::T(2, 0), PhaseWindow::T(2, -2), PhaseWindow::T(1, -1)})
                     closed_form_check(c, 2, kMinus, w, square(w.indices()), true, none, QScalar(1));
                   const PhaseWindow w = PhaseWindow::T(2, -2);
                   closed_form_check(c, 2, {0}, w, square(w.indices()), true, none, QScalar(1));
                 }});
  out.push_back({"kernels", "first structure, q-KP", [=](Context& c) {
                   for (int n : {0, 1})
                     closed_form_check(c, 1, kMinus, PhaseWindow::D(n), square(range(0, n + 3)), false, none, std::nullopt);
                   const std::set<std::pair<int, int>> known = {{1, 2}, {2, 1}, {2, 2}};
                   closed_form_check(c, 1, kMinus, PhaseWindow::D(2), square(range(0, 5)), false,
                                     [known](const Erratum& e) { return known.count({e.i, e.j}) > 0; }, std::nullopt, 6);
                 }});
  out.push_back({"kernels", "quadratic structure, q-KP and q-GD", [=](Context& c) {
                   for (int n : {0, 1, 2})
                     closed_form_check(c, 2, kMinus, PhaseWindow::D(n), square(range(0, n + 2)), true, none, QScalar(1));
                   closed_form_check(c, 2, kMinus, PhaseWindow::D(1, 0), square({0, 1}), true, none,
                                     QScalar(mpq_class(1, 2)));
                   closed_form_check(c, 2, kMinus, PhaseWindow::D(2, 0), square({0, 1, 2}), true, none, QScalar(1));
                 }});
  out.push_back({"kernels", "antisymmetry", [](Context& c) {
                   struct Case {
                     int s;
                     Splitting sigma;
                     PhaseWindow w;
                   };
                   for (const Case& k : {Case{1, kMinus, PhaseWindow::T(2, -1)}, Case{2, kMinus, PhaseWindow::T(2, -1)},
                                         Case{2, {0}, PhaseWindow::T(1, -1)}, Case{1, kMinus, PhaseWindow::D(1)},
                                         Case{2, kMinus, PhaseWindow::D(1, 0)}, Case{2, kMinus, PhaseWindow::D(2)}}) {
                     const std::vector<int> idx = k.w.m ? k.w.indices() : range(0, 3);
                     for (int i : idx)
                       for (int j : idx)
                         if (i <= j)
                           c.tally.require(kernel(k.s, k.sigma, k.w, i, j) ==
                                               QScalar(-1) * adjoint(kernel(k.s, k.sigma, k.w, j, i)),
                                           where(k.s, k.sigma, k.w) + " (" + std::to_string(i) + "," + std::to_string(j) + ")");
                   }
                 }});
  out.push_back({"kernels", "pencil relations", [](Context& c) {
                   const QScalar eps(mpq_class(3, 7));
                   for (int sigma : {-1, 0, 1}) {
                     for (int s : {2, 3}) {
                       const Symbol L = exact(c.rng, Basis::T, -2, 2), X = exact(c.rng, Basis::T, -2, 2);
                       const auto [lhs, rhs] = pencil_check(s, {sigma}, L, X, eps);
                       c.tally.require((lhs - rhs).is_zero(), "s=" + std::to_string(s) + " sigma=" + std::to_string(sigma));
                     }
                   }
                 }});
}

// ---------------------------------------------------------------- dirac

std::map<std::pair<int, int>, BracketKernel> kernel_matrix(int s, const PhaseWindow& w) {
  std::map<std::pair<int, int>, BracketKernel> ks;
  for (int i : w.indices())
    for (int j : w.indices()) ks[{i, j}] = kernel(s, kMinus, w, i, j);
  return ks;
}

void dirac_checks(std::vector<Check>& out) {
  out.push_back({"dirac", "q-GD1 reduced at u0 = 1 vanishes", [](Context& c) {
                   const PhaseWindow w = PhaseWindow::D(1, 0);
                   const LaurentField u1 = c.rng.field();
                   const auto red =
                       dirac_reduce(kernel_matrix(2, w), 0, 'u', [&](int i) { return i == 0 ? LaurentField(1) : u1; });
                   const ReducedKernel& r = red.at({1, 1});
                   c.tally.require(!r.local.is_zero(), "unreduced kernel vanishes");
                   for (int k = -4; k <= 4; ++k) c.tally.require(r.apply(LaurentField::z(k)).is_zero(), "mode " + std::to_string(k));
                 }});
  out.push_back({"dirac", "T basis at t_n = 1", [](Context& c) {
                   for (const PhaseWindow& w : {PhaseWindow::T(2, 0), PhaseWindow::T(2, -1), PhaseWindow::T(3, 1)}) {
                     std::map<int, LaurentField> vals;
                     for (int i : w.indices()) vals[i] = i == w.n ? LaurentField(1) : c.rng.field();
                     const auto values = [&](int i) { return vals.count(i) ? vals[i] : LaurentField(); };
                     const auto red = dirac_reduce(kernel_matrix(2, w), w.n, 't', values);
                     for (const auto& [ij, r] : red) {
                       const auto [i, j] = ij;
                       for (int k : {-5, 3, 7}) {
                         const LaurentField f = LaurentField::z(k);
                         const LaurentField g = values(j) * f;
                         if (!g.coeff(0).is_zero()) continue;
                         LaurentField want;
                         for (int l = std::max(*w.m, i + j - w.n); l <= std::min(w.n, i); ++l)
                           want += values(l) * shift(values(i + j - l) * f, l - j) -
                                   values(i + j - l) * shift(values(l) * f, i - l);
                         LaurentField h;
                         for (const auto& [p, a] : g.zpoly()) {
                           const QScalar num = (QScalar(1) - QScalar::qpow(static_cast<long>(i - w.n) * p)) *
                                               (QScalar(1) - QScalar::qpow(-static_cast<long>(j) * p));
                           h += LaurentField::monomial(a * num / (QScalar(1) - QScalar::qpow(-static_cast<long>(w.n) * p)), p);
                         }
                         want = QScalar(2) * (want + values(i) * h);
                         c.tally.require(r.apply(f) == want, w.str() + " (" + std::to_string(i) + "," + std::to_string(j) + ")");
                       }
                     }
                   }
                 }});
}

// ---------------------------------------------------------------- trihamiltonian

void trihamiltonian_checks(std::vector<Check>& out) {
  out.push_back({"trihamiltonian", "chain of Hamiltonian vectors", [](Context& c) {
                   for (int p = 1; p <= 3; ++p) {
                     const Symbol L = exact(c.rng, Basis::T, -2, 2);
                     const TriHamiltonianReport r = tri_hamiltonian_check(kMinus, L, p);
                     c.tally.require(r.j1_is_lax, "J1(dC_p+1) is the Lax vector, p=" + std::to_string(p));
                     c.tally.require(r.j2_is_twice_j1, "J2(dC_p) = 2 J1(dC_p+1), p=" + std::to_string(p));
                   }
                   Symbol L = c.rng.symbol(Basis::T, -8, 0, -8, -1, 1);
                   for (int p = 2; p <= 3; ++p) {
                     const TriHamiltonianReport r = tri_hamiltonian_check(kMinus, L, p, true);
                     c.tally.require(r.j3_is_j1.value_or(false), "J3(dC_p-1) = J1(dC_p+1), p=" + std::to_string(p));
                   }
                   Erratum e{"tri-hamiltonian", 0, 0, "J1(dC_{p+1}) = J2(dC_p)", "J2(dC_p) = 2 J1(dC_{p+1})", "2"};
                   c.erratum("T(2,-2), C_p = Tr L^p / p", e);
                 }});
  out.push_back({"trihamiltonian", "Casimirs are in involution", [](Context& c) {
                   for (int s = 1; s <= 2; ++s) {
                     const Symbol L = exact(c.rng, Basis::T, -2, 2);
                     for (int p = 1; p <= 3; ++p)
                       for (int r = 1; r <= 3; ++r)
                         c.tally.require(bracket(s, kMinus, L, casimir_gradient(L, p), casimir_gradient(L, r)).is_zero(),
                                         "s=" + std::to_string(s) + " p=" + std::to_string(p) + " r=" + std::to_string(r));
                   }
                 }});
  out.push_back({"trihamiltonian", "flows conserve the Casimirs", [](Context& c) {
                   for (int p = 1; p <= 3; ++p) {
                     Symbol L = exact(c.rng, Basis::T, -2, 1);
                     L.set(2, LaurentField(1));
                     const Symbol rhs = lax_rhs({kMinus, PhaseWindow::T(2, -2), p}, L);
                     for (int r = 1; r <= 3; ++r)
                       c.tally.require(pairing(casimir_gradient(L, r), rhs).is_zero(),
                                       "p=" + std::to_string(p) + " r=" + std::to_string(r));
                   }
                 }});
  out.push_back({"trihamiltonian", "constraints are stabilized", [](Context& c) {
                   Symbol L = exact(c.rng, Basis::T, -1, 1);
                   L.set(2, LaurentField(1));
                   c.tally.require(constraint_stability({kMinus, PhaseWindow::T(2, -1), 2}, L).stable, "monic");
                   const Symbol M = exact(c.rng, Basis::T, 0, 2);
                   c.tally.require(constraint_stability({kMinus, PhaseWindow::T(2, 0), 1}, M).stable, "m = 0");
                 }});
}

// ---------------------------------------------------------------- jacobi

// Concrete point of a window; sigma = 0 needs no constant order-0 mode.
Symbol concrete_lax(Sampler& rng, const PhaseWindow& w, bool monic, bool no_constant) {
  Symbol L(w.basis);
  for (int i : w.indices()) {
    LaurentField f = rng.field(-1, 1);
    if (no_constant && w.order_of(i) == 0) f = taylor_part(f) + laurent_part(f);
    if (monic && i == w.n) f = LaurentField(1);
    L.add(w.order_of(i), f);
  }
  return L;
}

void jacobi_checks(std::vector<Check>& out) {
  struct Case {
    int s;
    Splitting sigma;
    PhaseWindow w;
  };
  for (const Case& k : {Case{1, kMinus, PhaseWindow::T(2, 0)}, Case{2, kMinus, PhaseWindow::T(2, 0)},
                        Case{2, kMinus, PhaseWindow::T(1, -1)}, Case{1, {0}, PhaseWindow::T(1, -1)},
                        Case{2, {0}, PhaseWindow::T(1, -1)}, Case{1, kMinus, PhaseWindow::D(1, 0)},
                        Case{2, kMinus, PhaseWindow::D(1, 0)}}) {
    out.push_back({"jacobi", "cyclic sum vanishes, " + where(k.s, k.sigma, k.w), [k](Context& c) {
                     const std::vector<int> idx = k.w.indices();
                     for (int trial = 0; trial < 3; ++trial) {
                       const Symbol L = concrete_lax(c.rng, k.w, k.w.basis == Basis::T, k.sigma.sigma == 0);
                       std::vector<OneForm> forms;
                       for (int a = 0; a < 3; ++a) {
                         LaurentField xa = LaurentField::z(k.sigma.sigma == 0 ? c.rng.uniform(1, 2) : c.rng.uniform(-1, 1));
                         forms.push_back(OneForm::single(k.w, idx[static_cast<size_t>(c.rng.uniform(0, static_cast<int>(idx.size()) - 1))], xa));
                       }
                       c.tally.require(jacobi_residual(k.s, k.sigma, k.w, 12, L, forms).is_zero(), L.str());
                     }
                   }});
  }
}

// ---------------------------------------------------------------- logderivation

void log_checks(std::vector<Check>& out) {
  out.push_back({"logderivation", "derivation property", [](Context& c) {
                   const int floor = -4;
                   for (int t = 0; t < 20; ++t) {
                     const Symbol a = exact(c.rng, Basis::D, -1, 1), b = exact(c.rng, Basis::D, -1, 1);
                     const LambdaSymbol lhs = log_commutator(mul(a, b, floor), floor);
                     const LambdaSymbol rhs = mul(log_commutator(LambdaSymbol(a), floor), LambdaSymbol(b), floor) +
                                              mul(LambdaSymbol(a), log_commutator(LambdaSymbol(b), floor), floor);
                     c.tally.require(lhs.equals_on_window(rhs), a.str() + " ; " + b.str());
                   }
                 }});
  out.push_back({"logderivation", "powers of D_q commute with log D_q", [](Context& c) {
                   for (int p = -5; p <= 5; ++p)
                     c.tally.require(log_commutator(LaurentField(c.rng.nonzero_scalar()), p, -8).is_zero(), std::to_string(p));
                 }});
  out.push_back({"logderivation", "classical limit", [](Context& c) {
                   for (int k = 1; k <= 6; ++k) {
                     c.tally.require(log_coefficient(k).classical_limit() == mpq_class(k % 2 == 1 ? 1 : -1, k),
                                     "k=" + std::to_string(k));
                     const LogScalar printed = log_coefficient_printed(k);
                     if (printed != log_coefficient(k)) {
                       Erratum e{"log-commutator", k, 0, printed.str(), log_coefficient(k).str(), qnum(k).str()};
                       c.erratum("coefficient of tau^-k(D_q^k f) D_q^(p-k)", e);
                     }
                   }
                 }});
  out.push_back({"logderivation", "W_{1+inf} map", [](Context& c) {
                   const int floor = -6;
                   const PhaseWindow w = PhaseWindow::D(0);
                   for (int t = 0; t < 3; ++t) {
                     const Symbol L0 = c.rng.symbol(Basis::D, floor, 0, floor, -1, 1);
                     OneForm x{w, {}};
                     for (int j = 0; j <= 2; ++j) x.x[j] = c.rng.field(-1, 1);
                     const LambdaSymbol j0 = winfty_map(QScalar(0), L0, x, floor);
                     c.tally.require(j0.equals_on_window(LambdaSymbol(jmap(1, kMinus, L0, x, floor))), "c = 0");
                     const QScalar cc = c.rng.nonzero_scalar();
                     const LambdaSymbol central = winfty_map(cc, L0, x, floor) - j0;
                     bool lambda_only = !central.is_zero();
                     for (const auto& [k, s] : central.parts()) lambda_only = lambda_only && k == 1;
                     c.tally.require(lambda_only, "central term");
                     const ScalingLimitReport r = scaling_limit_check(cc, L0, x.to_symbol(floor), floor);
                     c.tally.require(r.matches, "scaling limit");
                   }
                 }});
}

std::vector<Check> registry() {
  std::vector<Check> out;
  algebra_checks(out);
  trace_checks(out);
  myb_checks(out);
  kernel_checks(out);
  dirac_checks(out);
  trihamiltonian_checks(out);
  jacobi_checks(out);
  log_checks(out);
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra", "trace",          "myb",    "kernels",
                                                 "dirac",   "trihamiltonian", "jacobi", "logderivation"};
  return names;
}

bool is_suite(const std::string& name) {
  return name == "all" || std::count(suite_names().begin(), suite_names().end(), name) > 0;
}

VerifyReport run_suite(const std::string& name) {
  if (!is_suite(name)) throw DomainError(ErrorKind::NotInDomain, "unknown suite '" + name + "'");
  std::vector<Check> checks;
  for (Check& c : registry())
    if (name == "all" || c.suite == name) checks.push_back(std::move(c));

  std::vector<CheckResult> results(checks.size());
  std::vector<std::vector<ErrataEntry>> errata(checks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < checks.size(); i = next++) {
      const Check& chk = checks[i];
      Sampler rng(chk.suite + "/" + chk.name);
      Tally tally;
      Context ctx{rng, tally, errata[i], chk.suite};
      CheckResult& res = results[i];
      res.suite = chk.suite;
      res.name = chk.name;
      try {
        chk.run(ctx);
        res.status = tally.ok() ? CheckResult::Status::Pass : CheckResult::Status::Fail;
        res.detail = tally.detail();
      } catch (const DomainError& e) {
        res.status = CheckResult::Status::Error;
        res.detail = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(checks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  VerifyReport report;
  std::vector<size_t> order(checks.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::tie(results[a].suite, results[a].name) < std::tie(results[b].suite, results[b].name);
  });
  for (size_t i : order) {
    report.checks.push_back(results[i]);
    for (ErrataEntry& e : errata[i]) report.errata.push_back(std::move(e));
  }
  return report;
}

}  // namespace qsym
