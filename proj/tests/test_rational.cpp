#include <catch2/catch_amalgamated.hpp>

#include "octagon/rational.hpp"
#include "octagon/scalar.hpp"
#include "octagon/sqrt2.hpp"

using namespace octagon;

TEST_CASE("Rat arithmetic is exact") {
  Rat a(1, 3), b(1, 6);
  CHECK(a + b == Rat(1, 2));
  CHECK(a - b == Rat(1, 6));
  CHECK(a * b == Rat(1, 18));
  CHECK(a / b == Rat(2));
  CHECK(-a == Rat(-1, 3));
  CHECK(abs(Rat(-7, 2)) == Rat(7, 2));
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(3, -6) == Rat(-1, 2));
}

TEST_CASE("Rat guards division and construction") {
  CHECK_THROWS_AS(Rat(1, 0), DomainError);
  CHECK_THROWS_AS(Rat(1) / Rat(0), DomainError);
}

TEST_CASE("Rat sign and zero predicates") {
  CHECK(Rat(0).is_zero());
  CHECK(Rat(0).sign() == 0);
  CHECK(Rat(-5, 3).sign() == -1);
  CHECK(Rat(5, 3).sign() == 1);
  CHECK(Rat(1, 2) < Rat(2, 3));
}

TEST_CASE("rat_parse accepts integers, fractions, and decimals") {
  CHECK(rat_parse("7") == Rat(7));
  CHECK(rat_parse("-7") == Rat(-7));
  CHECK(rat_parse("+3/4") == Rat(3, 4));
  CHECK(rat_parse("-22/7") == Rat(-22, 7));
  CHECK(rat_parse("0.25") == Rat(1, 4));
  CHECK(rat_parse("-1.5") == Rat(-3, 2));
  CHECK(rat_parse(".5") == Rat(1, 2));
}

TEST_CASE("rat_parse rejects malformed input") {
  CHECK_THROWS_AS(rat_parse(""), ParseError);
  CHECK_THROWS_AS(rat_parse("1/2/3"), ParseError);
  CHECK_THROWS_AS(rat_parse("abc"), ParseError);
  CHECK_THROWS_AS(rat_parse("1/0"), DomainError);
}

TEST_CASE("Rat string round-trip") {
  for (const char* s : {"0", "5", "-5", "3/7", "-13/40"}) {
    Rat r = rat_parse(s);
    CHECK(r.str() == s);
    CHECK(rat_parse(r.str()) == r);
  }
}

TEST_CASE("scalar traits dispatch over Rat and double") {
  CHECK(is_zero(Rat(0)));
  CHECK_FALSE(is_zero(Rat(1, 99)));
  CHECK(sign_of(Rat(-2)) == -1);
  CHECK(as_double(Rat(1, 4)) == 0.25);
  CHECK(from_rat<double>(Rat(3, 2)) == 1.5);
  CHECK(is_zero(0.0));
  CHECK(sign_of(-2.0) == -1);
}

TEST_CASE("Sqrt2 field arithmetic") {
  Sqrt2 r2 = Sqrt2::sqrt2();
  CHECK(r2 * r2 == Sqrt2(Rat(2)));
  // (1 + r2)(-1 + r2) = 1
  CHECK((Sqrt2(Rat(1)) + r2) * (Sqrt2(Rat(-1)) + r2) == Sqrt2(Rat(1)));
  Sqrt2 u(Rat(3, 2), Rat(-1, 4));
  CHECK(u / u == Sqrt2(Rat(1)));
  CHECK_THROWS_AS(u / Sqrt2(Rat(0)), DomainError);
}

TEST_CASE("Sqrt2 sign handles mixed-sign components") {
  // 3 - 2*sqrt2 > 0, 2 - 2*sqrt2 < 0
  CHECK(Sqrt2(Rat(3), Rat(-2)).sign() == 1);
  CHECK(Sqrt2(Rat(2), Rat(-2)).sign() == -1);
  CHECK(Sqrt2(Rat(0), Rat(0)).sign() == 0);
  CHECK(Sqrt2(Rat(-3), Rat(2)).sign() == -1);
  double x = Sqrt2(Rat(1), Rat(1)).to_double();
  CHECK(x == Catch::Approx(1 + std::sqrt(2.0)).epsilon(1e-15));
}
