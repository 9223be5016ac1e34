#include "doctest.h"
#include "qsym/errors.hpp"
#include "qsym/logsymbol.hpp"
#include "support.hpp"

using namespace qsym;
using namespace qsym::testing;

namespace {

const QScalar kQ = QScalar::q();

Symbol exact_D(int lo, int hi) { return random_symbol(Basis::D, lo, hi, lo).with_floor(Symbol::kExact); }

// First-order jet v0 + alpha v1 with lambda-polynomial parts.
struct AlphaJet {
  LogScalar v0;
  LogScalar v1;
};

AlphaJet operator*(const AlphaJet& a, const AlphaJet& b) { return {a.v0 * b.v0, a.v0 * b.v1 + a.v1 * b.v0}; }

// [alpha k]_q = prod_{i<k} (1 - q^(alpha-i)) / (1 - q^(i+1)) with q^alpha = 1 + alpha lambda.
AlphaJet alpha_binomial(int k) {
  AlphaJet out{LogScalar(QScalar(1)), LogScalar()};
  for (int i = 0; i < k; ++i) {
    const QScalar den = QScalar(1) - QScalar::qpow(i + 1);
    const QScalar qi = QScalar::qpow(-i);
    out = out * AlphaJet{LogScalar((QScalar(1) - qi) / den), LogScalar::monomial(-qi / den, 1)};
  }
  return out;
}

OneForm random_form(int jmax) {
  OneForm f{PhaseWindow::D(0), {}};
  for (int j = 0; j <= jmax; ++j) f.x[j] = random_field(-1, 1, 2);
  return f;
}

Symbol random_L0(int floor) { return random_symbol(Basis::D, floor, 0, floor, -1, 1); }

}  // namespace

TEST_CASE("lambda scalars") {
  const LogScalar l = LogScalar::lambda();
  CHECK(l.str() == "logq");
  CHECK((l * l).str() == "logq^2");
  CHECK((LogScalar(kQ - QScalar(1)) * l + LogScalar(QScalar(2))).str() == "(q-1)*logq + 2");
  CHECK((l - l).is_zero());
  CHECK(LogScalar::monomial(QScalar(1) / (kQ - QScalar(1)), 1).classical_limit() == 1);
  CHECK_THROWS_AS(LogScalar::monomial(QScalar(1) / (kQ - QScalar(1)), 0).classical_limit(), DomainError);
}

TEST_CASE("commutator with log D_q on a single term") {
  const LambdaSymbol c = log_commutator(LaurentField::z(), 0, -3);
  CHECK(c.str() == "logq*(z^1 + (1/(q-1))*D^-1)");
  CHECK(c.part(0).is_zero());
  // Constants commute with log D_q at every order.
  for (int p = -5; p <= 5; ++p) CHECK(log_commutator(LaurentField(1), p, -8).is_zero());
  CHECK(log_commutator(Symbol::monomial(Basis::D, LaurentField(QScalar(7)), 3), -4).is_zero());
  CHECK_THROWS_AS(log_commutator(LaurentField::z(), 0, Symbol::kExact), DomainError);
}

TEST_CASE("log coefficients against the alpha expansion of q-binomials") {
  CHECK(alpha_binomial(0).v1.is_zero());
  for (int k = 1; k <= 7; ++k) {
    const AlphaJet b = alpha_binomial(k);
    INFO("k = " << k);
    CHECK(b.v0.is_zero());
    CHECK(b.v1 == log_coefficient(k));
  }
  // k = 0: (1/alpha)(tau^alpha f - f) with tau^alpha z^m = q^(alpha m) z^m.
  const LaurentField f = LaurentField::z(3) * QScalar(2) - LaurentField::z(-2) + LaurentField(QScalar(5));
  const LaurentField oracle = LaurentField::z(3) * QScalar(6) + LaurentField::z(-2) * QScalar(2);
  CHECK(log_commutator(f, 2, 2).part(1).coeff(2) == oracle);
}

TEST_CASE("the expansion terms are tau^-k of q-derivatives") {
  const LaurentField f = LaurentField::z(4) - LaurentField::z(-1) * QScalar(3);
  const int p = 1;
  const LambdaSymbol c = log_commutator(f, p, -5);
  LaurentField d = f;
  for (int k = 1; k <= 6; ++k) {
    d = qderive(d);
    INFO("k = " << k);
    CHECK(c.part(1).coeff(p - k) == shift(d, -k) * log_coefficient(k).coeff(1));
  }
}

TEST_CASE("q -> 1 contraction gives the classical log expansion") {
  CHECK(log_coefficient(0).classical_limit() == 0);
  for (int k = 1; k <= 6; ++k) {
    const mpq_class expect = mpq_class(k % 2 == 1 ? 1 : -1, k);
    CHECK(log_coefficient(k).classical_limit() == expect);
  }
}

TEST_CASE("printed log coefficients lack the 1/(k)_q factor") {
  CHECK(log_coefficient_printed(0) == log_coefficient(0));
  CHECK(log_coefficient_printed(1) == log_coefficient(1));
  for (int k = 2; k <= 6; ++k) {
    INFO("k = " << k);
    CHECK(log_coefficient_printed(k) != log_coefficient(k));
    CHECK(log_coefficient_printed(k) == LogScalar(qnum(k)) * log_coefficient(k));
    CHECK(log_coefficient_printed(k).classical_limit() != log_coefficient(k).classical_limit());
  }
}

TEST_CASE("log D_q is a derivation") {
  const int floor = -4;
  for (int trial = 0; trial < 100; ++trial) {
    const Symbol a = exact_D(-1, 1);
    const Symbol b = exact_D(-1, 1);
    const LambdaSymbol lhs = log_commutator(mul(a, b, floor), floor);
    const LambdaSymbol rhs = mul(log_commutator(LambdaSymbol(a), floor), LambdaSymbol(b), floor) +
                             mul(LambdaSymbol(a), log_commutator(LambdaSymbol(b), floor), floor);
    INFO("a = " << a.str() << ", b = " << b.str());
    REQUIRE(lhs.floor() <= -1);
    CHECK(lhs.equals_on_window(rhs));
  }
}

TEST_CASE("W_{1+inf} map without central term is the first structure at n = 0") {
  const int floor = -6;
  const PhaseWindow w = PhaseWindow::D(0);
  const Symbol L = w.formal_lax(floor);
  for (int j = 0; j <= 3; ++j) {
    const OneForm x = OneForm::single(w, j, LaurentField::var('x', j));
    const LambdaSymbol lhs = winfty_map(QScalar(0), L, x, floor);
    CHECK(lhs.equals_on_window(LambdaSymbol(jmap(1, Splitting{-1}, L, x, floor))));
  }
  for (int trial = 0; trial < 5; ++trial) {
    const Symbol L0 = random_L0(floor);
    const OneForm x = random_form(2);
    CHECK(winfty_map(QScalar(0), L0, x, floor).equals_on_window(LambdaSymbol(jmap(1, Splitting{-1}, L0, x, floor))));
  }
  CHECK_THROWS_AS(winfty_map(QScalar(1), L, OneForm::single(PhaseWindow::D(1), 0, LaurentField(1)), floor),
                  DomainError);
}

TEST_CASE("the central term is lambda-proportional and independent of the fields") {
  const int floor = -6;
  const QScalar c = QScalar(3) / QScalar(2);
  const Symbol L = PhaseWindow::D(0).formal_lax(floor);
  for (int j = 0; j <= 3; ++j) {
    const OneForm x = OneForm::single(PhaseWindow::D(0), j, LaurentField::var('x', j));
    const LambdaSymbol central = winfty_map(c, L, x, floor) - winfty_map(QScalar(0), L, x, floor);
    CHECK(central.equals_on_window(winfty_map(c, Symbol(Basis::D), x, floor)));
    for (const auto& [k, s] : central.parts()) {
      CHECK(k == 1);
      for (const auto& [r, f] : s.coeffs()) CHECK_FALSE(f.contains('u'));
    }
  }
  for (int trial = 0; trial < 4; ++trial) {
    const OneForm x = random_form(2);
    const OneForm y = random_form(2);
    const LogScalar v = pairing(winfty_map(c, Symbol(Basis::D), x, floor), y.to_symbol(floor));
    CHECK(v.coeff(0).is_zero());
  }
}

TEST_CASE("the W_{1+inf} bracket is antisymmetric") {
  const int floor = -8;
  for (int trial = 0; trial < 6; ++trial) {
    const Symbol L0 = random_L0(floor);
    const QScalar c = random_scalar(false);
    const OneForm x = random_form(2);
    const OneForm y = random_form(2);
    const LogScalar xy = pairing(winfty_map(c, L0, x, floor), y.to_symbol(floor));
    const LogScalar yx = pairing(winfty_map(c, L0, y, floor), x.to_symbol(floor));
    CHECK((xy + yx).is_zero());
  }
}

TEST_CASE("scaling limit of the normalized quadratic structure") {
  const int floor = -6;
  const PhaseWindow w = PhaseWindow::D(0);
  SUBCASE("formal fields") {
    const Symbol L0 = w.formal_lax(floor);
    for (int j = 0; j <= 2; ++j) {
      const Symbol x = OneForm::single(w, j, LaurentField::var('x', j)).to_symbol(floor);
      const ScalingLimitReport r = scaling_limit_check(QScalar(2), L0, x, floor);
      CHECK(r.finite);
      CHECK(r.matches);
      CHECK(r.limit.floor() <= -2);
    }
  }
  SUBCASE("random fields and central charges") {
    for (int trial = 0; trial < 4; ++trial) {
      const Symbol L0 = random_L0(floor);
      const Symbol x = random_form(2).to_symbol(floor);
      const ScalingLimitReport r = scaling_limit_check(random_scalar(), L0, x, floor);
      CHECK(r.quadratic_at_zero.is_zero());
      CHECK(r.matches);
    }
  }
  SUBCASE("degenerate limit") {
    const Symbol L0 = random_L0(floor);
    const OneForm x = random_form(2);
    const ScalingLimitReport r = scaling_limit_check(QScalar(0), L0, x.to_symbol(floor), floor);
    CHECK(r.limit.equals_on_window(LambdaSymbol(jmap(1, Splitting{-1}, L0, x, floor))));
  }
}
