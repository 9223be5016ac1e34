#include "doctest.h"
#include "qsym/errors.hpp"
#include "qsym/parse.hpp"
#include "support.hpp"

using namespace qsym;
using namespace qsym::testing;

TEST_CASE("parsing symbols") {
  const Symbol a = parse_symbol("z*T^1 + 1");
  CHECK(a.basis() == Basis::T);
  CHECK(a.exact());
  CHECK(a.coeff(1) == LaurentField::z());
  CHECK(a.coeff(0) == LaurentField(1));
  CHECK(a.coeffs().size() == 2);

  const Symbol b = parse_symbol("(1/(q-1))*z^-1*D^-1");
  CHECK(b.basis() == Basis::D);
  CHECK(b.coeffs().size() == 1);
  CHECK(b.coeff(-1) == LaurentField::z(-1) * (QScalar(1) / (QScalar::q() - QScalar(1))));

  // Operator products follow the commutation rules.
  CHECK(parse_symbol("T^1*z").equals_on_window(Symbol::monomial(Basis::T, LaurentField::z() * QScalar::q(), 1)));
  CHECK(parse_symbol("D*z", Basis::D).equals_on_window(parse_symbol("q*z*D + 1")));
  const Symbol inv = parse_symbol("D^-1*z", Basis::D, -4);
  CHECK(inv.floor() == -4);
  CHECK(inv.equals_on_window(mul(Symbol::monomial(Basis::D, LaurentField(1), -1), Symbol::function(Basis::D, LaurentField::z()), -4)));

  // The other operator is rewritten in the basis of the first one.
  CHECK(parse_symbol("D^-1*T").equals_on_window(mul(Symbol::monomial(Basis::D, LaurentField(1), -1), t_in_D(), -8)));
  CHECK(parse_symbol("D^1", Basis::T).basis() == Basis::D);
  CHECK(parse_symbol("T*D^1").equals_on_window(mul(Symbol::monomial(Basis::T, LaurentField(1), 1), d_in_T())));

  // Functions alone take the requested basis.
  CHECK(parse_symbol("z^2 - 3", Basis::D).basis() == Basis::D);
}

TEST_CASE("parsing scalars and fields") {
  CHECK(parse_scalar("(q^2-1)/(2*q+3)") == (QScalar::q() * QScalar::q() - QScalar(1)) / (QScalar(2) * QScalar::q() + QScalar(3)));
  CHECK(parse_scalar("1/(q)") == QScalar::qpow(-1));
  CHECK(parse_scalar("q^-3") == QScalar::qpow(-3));
  CHECK(parse_scalar("-3/4") == QScalar(-3) / QScalar(4));
  const LaurentField g = parse_field("z^1*t2-u0*u1+2*tau^-1(u1)+E(x0)+p+(t-1)");
  const LaurentField expect = LaurentField::var('t', 2) * LaurentField::z() -
                              LaurentField::var('u', 0) * LaurentField::var('u', 1) +
                              shift(LaurentField::var('u', 1), -1) * QScalar(2) +
                              euler_derive(LaurentField::var('x', 0)) + project(LaurentField::var('t', -1), Proj::Plus);
  CHECK(g == expect);
  CHECK(parse_field(g.str()) == g);
  CHECK(parse_field("x_3") == LaurentField::var('x', 3));
}

TEST_CASE("parse and print round trip") {
  for (Basis basis : {Basis::T, Basis::D}) {
    for (int trial = 0; trial < 60; ++trial) {
      const Symbol s = random_symbol(basis, -3, 2, -3).with_floor(Symbol::kExact);
      const Symbol back = parse_symbol(s.str(), basis);
      INFO(s.str());
      CHECK(back.exact());
      CHECK((back - s).is_zero());
      CHECK(back.str() == s.str());
    }
  }
  for (int trial = 0; trial < 30; ++trial) {
    const QScalar c = random_scalar();
    CHECK(parse_scalar(c.str()) == c);
  }
}

TEST_CASE("parse errors carry positions") {
  auto position = [](const std::string& text) {
    try {
      parse_symbol(text);
    } catch (const ParseError& e) {
      return std::pair{e.line(), e.column()};
    }
    return std::pair{0, 0};
  };
  CHECK(position("z*T^1 +") == std::pair{1, 8});
  CHECK(position("z*T^1 ) ") == std::pair{1, 7});
  CHECK(position("z +\n  $") == std::pair{2, 3});
  CHECK(position("z/z") == std::pair{1, 3});
  CHECK(position("1/(q-q)") == std::pair{1, 3});
  CHECK(position("w") == std::pair{1, 1});
  CHECK_THROWS_AS(parse_scalar("z"), ParseError);
  CHECK_THROWS_AS(parse_field("T^1"), ParseError);
}
