#include "doctest.h"
#include "qsym/errors.hpp"
#include "qsym/scalar.hpp"
#include "support.hpp"

using namespace qsym;
using qsym::testing::random_nonzero_scalar;
using qsym::testing::random_scalar;

namespace {

QScalar poly(std::vector<long> c) {
  std::vector<mpz_class> v(c.begin(), c.end());
  return QScalar(IntPoly(v), IntPoly(1));
}

// Brute-force q-binomial: product of (q^a - 1) quotients, multiplied out with
// explicit numerator and denominator lists and a single final division.
QScalar brute_qbinomial(long m, long k) {
  QScalar num(1);
  QScalar den(1);
  for (long i = 0; i < k; ++i) {
    num *= QScalar::qpow(m - i) - QScalar(1);
    den *= QScalar::qpow(i + 1) - QScalar(1);
  }
  return num / den;
}

}  // namespace

TEST_CASE("qnum examples") {
  CHECK(qnum(2) == poly({1, 1}));
  CHECK(qnum(0).is_zero());
  CHECK(qnum(-1) == -QScalar::qpow(-1));
  CHECK(qnum(3).str() == "q^2+q+1");
}

TEST_CASE("qbinomial examples") {
  CHECK(qbinomial(2, 1) == poly({1, 1}));
  CHECK(qbinomial(1, 2).is_zero());
  for (long k = 1; k <= 6; ++k) {
    const QScalar expected = QScalar(k % 2 ? -1 : 1) * QScalar::qpow(-k * (k + 1) / 2);
    CHECK(qbinomial(-1, k) == expected);
    CHECK(brute_qbinomial(-1, k) == expected);
  }
}

TEST_CASE("eval_q examples") {
  CHECK(eval_q(poly({1, 1}), 1) == 2);
  CHECK(eval_q(poly({-1, 0, 1}) / poly({-1, 1}), 1) == 2);
  CHECK_THROWS_AS(eval_q(poly({-1, 1}).inverse(), 1), DomainError);
}

TEST_CASE("canonical printing") {
  CHECK(poly({-1, 0, 1}).str() == "q^2-1");
  CHECK(QScalar(0).str() == "0");
  CHECK((QScalar(1) / poly({-1, 1})).str() == "1/(q-1)");
  CHECK((poly({1, 1}) / poly({0, 0, 2})).str() == "(q+1)/(2*q^2)");
  // reduced form: (q^2-1)/(q-1) = q+1
  CHECK(poly({-1, 0, 1}) / poly({-1, 1}) == poly({1, 1}));
  // denominator leading coefficient is positive and content is removed
  const QScalar s = poly({2, 2}) / poly({0, -4});
  CHECK(s.den().lead() > 0);
  CHECK(s == QScalar(-1) * (poly({1, 1}) / poly({0, 2})));
}

TEST_CASE("field axioms on random scalars") {
  for (int t = 0; t < 60; ++t) {
    const QScalar a = random_scalar(), b = random_scalar(), c = random_scalar();
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a - a == QScalar(0));
    const QScalar n = random_nonzero_scalar();
    CHECK(n * n.inverse() == QScalar(1));
    CHECK((a / n) * n == a);
  }
}

TEST_CASE("qnum additivity") {
  for (long m = -8; m <= 8; ++m)
    for (long n = -8; n <= 8; ++n) CHECK(qnum(m + n) == qnum(m) + QScalar::qpow(m) * qnum(n));
}

TEST_CASE("q-Pascal rule") {
  for (long m = -6; m <= 6; ++m)
    for (long k = 1; k <= 6; ++k) {
      CHECK(qbinomial(m, k) == QScalar::qpow(k) * qbinomial(m - 1, k) + qbinomial(m - 1, k - 1));
      CHECK(qbinomial(m, k) == brute_qbinomial(m, k));
    }
}

TEST_CASE("qnum at q = 1") {
  for (long n = -8; n <= 8; ++n) CHECK(eval_q(qnum(n), 1) == n);
}

TEST_CASE("substitution q -> q^k") {
  const QScalar s = poly({1, 2}) / poly({-1, 0, 1});
  CHECK(s.substitute_qpow(-1).substitute_qpow(-1) == s);
  CHECK(QScalar::q().substitute_qpow(3) == QScalar::qpow(3));
  CHECK(eval_q(s.substitute_qpow(2), 2) == eval_q(s, 4));
}
