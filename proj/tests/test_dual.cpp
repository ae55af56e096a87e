#include <catch2/catch_amalgamated.hpp>

#include "octagon/coords.hpp"
#include "octagon/dual.hpp"
#include "octagon/rational.hpp"

using namespace octagon;

namespace {

using DQ = Dual4<Rat>;

DQ var(const Rat& x, int i) { return DQ::variable(x, i); }

}  // namespace

TEST_CASE("Dual4 differentiates polynomial expressions exactly") {
  // f(a,b,c,d) = a^2 b + c d; grad = (2ab, a^2, d, c).
  Rat a(2, 3), b(5, 7), c(-1, 2), d(3);
  DQ f = var(a, 0) * var(a, 0) * var(b, 1) + var(c, 2) * var(d, 3);
  CHECK(f.value() == a * a * b + c * d);
  CHECK(f.partial(0) == Rat(2) * a * b);
  CHECK(f.partial(1) == a * a);
  CHECK(f.partial(2) == d);
  CHECK(f.partial(3) == c);
}

TEST_CASE("Dual4 quotient rule is exact") {
  // f = a / (b + c), df/da = 1/(b+c), df/db = df/dc = -a/(b+c)^2.
  Rat a(4, 5), b(1, 3), c(2);
  DQ f = var(a, 0) / (var(b, 1) + var(c, 2));
  Rat s = b + c;
  CHECK(f.value() == a / s);
  CHECK(f.partial(0) == Rat(1) / s);
  CHECK(f.partial(1) == -a / (s * s));
  CHECK(f.partial(2) == -a / (s * s));
  CHECK(f.partial(3) == Rat(0));
}

TEST_CASE("Dual4 division by a zero value throws") {
  CHECK_THROWS_AS(var(Rat(1), 0) / DQ(Rat(0)), DomainError);
}

TEST_CASE("Dual4 negation and compound assignment") {
  DQ x = var(Rat(3), 1);
  DQ y = -x;
  CHECK(y.value() == Rat(-3));
  CHECK(y.partial(1) == Rat(-1));
  DQ z = x;
  z *= x;
  CHECK(z.value() == Rat(9));
  CHECK(z.partial(1) == Rat(6));
}

TEST_CASE("lift and value_and_gradient agree with a hand gradient") {
  CoordsQ p{Rat(1, 2), Rat(1, 4), Rat(1, 2), Rat(1, 4)};
  // f = abcd; grad = (bcd, acd, abd, abc).
  auto f = [](const CanonCoords<DQ>& q) { return q.a * q.b * q.c * q.d; };
  auto [val, grad] = value_and_gradient(f, p);
  CHECK(val == p.a * p.b * p.c * p.d);
  CHECK(grad[0] == p.b * p.c * p.d);
  CHECK(grad[1] == p.a * p.c * p.d);
  CHECK(grad[2] == p.a * p.b * p.d);
  CHECK(grad[3] == p.a * p.b * p.c);
}

TEST_CASE("Dual4 nests over double for second-order use") {
  using DD = Dual4<double>;
  DD x = DD::variable(3.0, 0);
  DD f = x * x * x;
  CHECK(f.value() == 27.0);
  CHECK(f.partial(0) == 27.0);
}
