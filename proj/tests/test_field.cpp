#include "doctest.h"
#include "qsym/errors.hpp"
#include "qsym/field.hpp"
#include "support.hpp"

using namespace qsym;
using qsym::testing::random_field;

namespace {

LaurentField z(int k) { return LaurentField::z(k); }
QScalar q(long k) { return QScalar::qpow(k); }

// Direct evaluation of f(q^beta z) mode by mode.
LaurentField shift_oracle(const LaurentField& f, int beta) {
  LaurentField r;
  for (const auto& [k, c] : f.zpoly()) r += LaurentField::monomial(c * q(long(beta) * k), k);
  return r;
}

}  // namespace

TEST_CASE("shift examples") {
  CHECK(shift(z(2), 1) == q(2) * z(2));
  CHECK(shift(z(1), -1) == q(-1) * z(1));
  CHECK(shift(z(1) + z(-1), 1) == q(1) * z(1) + q(-1) * z(-1));
}

TEST_CASE("qderive examples") {
  CHECK(qderive(z(1)) == LaurentField(1));
  CHECK(qderive(z(2)) == qnum(2) * z(1));
  CHECK(qderive(z(-1)) == -q(-1) * z(-2));
  CHECK(qderive(LaurentField(7)).is_zero());
}

TEST_CASE("integrals") {
  CHECK(integrate(LaurentField(1)) == QScalar(1));
  CHECK(integrate(z(3)).is_zero());
  CHECK(integrate(QScalar(3) * z(-1) + LaurentField(5)) == QScalar(5));
  CHECK(integrate_m1(z(-1)) == QScalar(1));
  CHECK(integrate_m1(qderive(z(5) + QScalar(2) * z(-3))).is_zero());
  CHECK(integrate_m1(shift(z(-1), 1)) == q(-1));
  CHECK_THROWS_AS(integrate(LaurentField::var('t', 0)), DomainError);
}

TEST_CASE("projectors and Euler derivative") {
  const LaurentField f = z(2) + LaurentField(1) + z(-1);
  CHECK(taylor_part(f) == z(2));
  CHECK(laurent_part(f) == z(-1));
  CHECK(taylor_part(LaurentField(7)).is_zero());
  CHECK(taylor_part(f) + constant_part(f) + laurent_part(f) == f);
  CHECK(euler_derive(z(3)) == QScalar(3) * z(3));
  CHECK(euler_derive(LaurentField(1)).is_zero());
  CHECK(euler_derive(z(-2)) == QScalar(-2) * z(-2));
}

TEST_CASE("shift agrees with direct evaluation") {
  for (int t = 0; t < 30; ++t) {
    const LaurentField f = random_field(-4, 4, 4);
    const int beta = qsym::testing::uniform(-3, 3);
    CHECK(shift(f, beta) == shift_oracle(f, beta));
  }
}

TEST_CASE("q-Leibniz and q-commutation") {
  for (int t = 0; t < 30; ++t) {
    const LaurentField f = random_field(), g = random_field();
    CHECK(qderive(f * g) == qderive(f) * g + shift(f, 1) * qderive(g));
    CHECK(qderive(shift(f, 1)) == QScalar::q() * shift(qderive(f), 1));
    // the defining quotient, computed independently
    const LaurentField quotient = shift_oracle(f, 1) - f;
    CHECK(qderive(f) * z(1) * (QScalar::q() - QScalar(1)) == quotient);
  }
}

TEST_CASE("shift invariance and adjointness") {
  for (int t = 0; t < 30; ++t) {
    const LaurentField a = random_field(), b = random_field();
    const int beta = qsym::testing::uniform(-3, 3);
    CHECK(integrate(shift(a, beta)) == integrate(a));
    CHECK(integrate_m1(shift(a, 1) * b) == integrate_m1(a * q(-1) * shift(b, -1)));
  }
}

TEST_CASE("projector properties") {
  for (int t = 0; t < 30; ++t) {
    const LaurentField a = random_field(-3, 3, 4), b = random_field(-3, 3, 4);
    CHECK(taylor_part(taylor_part(a)) == taylor_part(a));
    CHECK(laurent_part(laurent_part(a)) == laurent_part(a));
    CHECK(taylor_part(shift(a, 2)) == shift(taylor_part(a), 2));
    CHECK(laurent_part(shift(a, -1)) == shift(laurent_part(a), -1));
    CHECK(integrate(taylor_part(a) * b) == integrate(a * laurent_part(b)));
  }
}

TEST_CASE("formal coordinates") {
  const LaurentField t2 = LaurentField::var('t', 2);
  const LaurentField f = z(1) * t2;
  CHECK(shift(f, 1) == q(1) * z(1) * LaurentField::var('t', 2, 1));
  CHECK(f.linear_in('t').size() == 1);
  CHECK(f.substitute('t', [](int i) { return LaurentField(i); }) == QScalar(2) * z(1));
  CHECK(project(t2, Proj::Plus).str() == "p+(t2)");
  CHECK(project(f, Proj::Plus).str() == "p+(z^1*t2)");
  // q-derivative on a formal coordinate follows the defining quotient
  CHECK(qderive(t2) * z(1) * (QScalar::q() - QScalar(1)) == shift(t2, 1) - t2);
}

namespace {

LaurentField random_formal() {
  LaurentField f;
  for (int t = 0; t < 3; ++t) {
    LaurentField term = random_field(-2, 2, 2);
    if (term.is_zero()) term = LaurentField(1);
    const int n = qsym::testing::uniform(1, 2);
    for (int i = 0; i < n; ++i)
      term = term * LaurentField::var('u', qsym::testing::uniform(0, 1), qsym::testing::uniform(-1, 1));
    f += term;
  }
  return f;
}

}  // namespace

TEST_CASE("projected composite expressions") {
  for (int t = 0; t < 25; ++t) {
    const LaurentField f = random_formal();
    const LaurentField u0 = random_field(-2, 2, 3), u1 = random_field(-2, 2, 3);
    auto values = [&](int i) { return i == 0 ? u0 : u1; };
    const int beta = qsym::testing::uniform(-2, 2);
    for (Proj p : {Proj::Plus, Proj::Minus, Proj::Zero}) {
      const LaurentField pf = project(f, p);
      CHECK(pf.substitute('u', values) == project(f.substitute('u', values), p));
      CHECK(shift(pf, beta).substitute('u', values) ==
            project(shift(f, beta).substitute('u', values), p));
      CHECK(euler_derive(pf).substitute('u', values) ==
            project(euler_derive(f.substitute('u', values)), p));
      CHECK(project(pf, p) == pf);
      for (Proj other : {Proj::Plus, Proj::Minus, Proj::Zero})
        if (other != p) CHECK(project(pf, other).is_zero());
      CHECK(pf.contains('u'));
    }
  }
}

TEST_CASE("projected atoms are canonical") {
  const LaurentField u = LaurentField::var('u', 0), x = LaurentField::var('x', 1);
  const LaurentField a = project(z(2) * u * x, Proj::Plus);
  const LaurentField b = project(x * z(2) * u, Proj::Plus);
  CHECK(a == b);
  CHECK((a - b).is_zero());
  // shift moves inside: tau p(z^2 u x) = q^2 p(z^2 tau(u) tau(x))
  CHECK(shift(a, 1) == q(2) * project(z(2) * shift(u, 1) * shift(x, 1), Proj::Plus));
  // the three mode projectors decompose the identity
  const LaurentField e = z(-1) * u * shift(x, 2);
  CHECK(project(e, Proj::Plus) + project(e, Proj::Minus) + project(e, Proj::Zero) == e);
  // the constant mode is shift invariant
  CHECK(project(shift(e, 3), Proj::Zero) == project(e, Proj::Zero));
  const auto lin = (z(1) * a).linear_in('x');
  REQUIRE(lin.size() == 1);
  CHECK(lin.begin()->second == z(1));
}
