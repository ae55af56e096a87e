#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "octagon/invariants.hpp"
#include "octagon/maps.hpp"
#include "octagon/sampling.hpp"
#include "octagon/sqrt2.hpp"

using namespace octagon;

TEST_CASE("F1 and F2 are exactly invariant under A and Delta") {
  std::mt19937_64 rng(31);
  int done = 0;
  while (done < 40) {
    CoordsQ p = random_coords(rng);
    try {
      Rat f1 = invariant_F1(p), f2 = invariant_F2(p);
      CoordsQ pa = map_A(p);
      CHECK(invariant_F1(pa) == f1);
      CHECK(invariant_F2(pa) == f2);
      CoordsQ pd = map_Delta(p);
      CHECK(invariant_F1(pd) == f1);
      CHECK(invariant_F2(pd) == f2);
      ++done;
    } catch (const DomainError&) {
    }
  }
}

TEST_CASE("fixed values at the reference point (1/2, 1/4, 1/2, 1/4)") {
  CoordsQ p{Rat(1, 2), Rat(1, 4), Rat(1, 2), Rat(1, 4)};
  CoordsQ image = map_Delta(p);
  CHECK(image == CoordsQ{Rat(14, 37), Rat(17, 74), Rat(14, 37), Rat(17, 74)});
  CHECK(invariant_F1(p) == Rat(25, 64));
  CHECK(invariant_F2(p) == Rat(729, 64));
  CHECK(invariant_G(p) == Rat(11));
  CHECK(invariant_H(p) == Rat(25, 729));
}

TEST_CASE("G equals twice the product of the two defect sums") {
  std::mt19937_64 rng(32);
  int done = 0;
  while (done < 30) {
    CoordsQ p = random_coords(rng);
    try {
      Rat g = Rat(2) * (g_ab(p) + g_cd(p)) * (gstar_ab(p) + gstar_cd(p));
      CHECK(invariant_G(p) == g);
      // And it matches F2 - F1 as a rational identity.
      CHECK(invariant_F2(p) - invariant_F1(p) == g);
      ++done;
    } catch (const DomainError&) {
    }
  }
}

TEST_CASE("the regular octagon sits on the level F1 = F2 = 4") {
  Sqrt2 s = Sqrt2::half_sqrt2();
  CanonCoords<Sqrt2> reg{s, s, s, s};
  CHECK(invariant_F1(reg) == Sqrt2(Rat(4)));
  CHECK(invariant_F2(reg) == Sqrt2(Rat(4)));
  CHECK(invariant_G(reg) == Sqrt2(Rat(0)));
}

TEST_CASE("invariants guard the coordinate hyperplanes") {
  CoordsQ p{Rat(0), Rat(1), Rat(1), Rat(1)};
  CHECK_THROWS_AS(invariant_F1(p), DomainError);
  CHECK_THROWS_AS(invariant_F2(p), DomainError);
  CHECK_THROWS_AS(invariant_report(p), DomainError);
  CHECK_THROWS_AS(membership(p), DomainError);
}

TEST_CASE("membership separates X and X_+") {
  std::mt19937_64 rng(33);
  CoordsQ p = random_Xplus_coords(rng);
  auto m = membership(p);
  CHECK(m.in_X);
  CHECK(m.in_X_plus);
  CHECK(m.component.has_value());
  CHECK(m.component->first == 1);
  CHECK(m.component->second == 1);
  // A factor forced to zero leaves X.
  CoordsQ q{Rat(1, 2), Rat(3, 2), Rat(1, 2), Rat(3, 2)};  // 1 + a - b = 0
  auto mq = membership(q);
  CHECK_FALSE(mq.in_X);
  CHECK_FALSE(mq.in_X_plus);
}

TEST_CASE("Y polynomial fixed values") {
  CHECK(y_polynomial(Rat(0), Rat(-2)) == Rat(0));
  CHECK(y_polynomial(Rat(3), Rat(4)) == Rat(3321));
}

TEST_CASE("constructed Y-points satisfy the Y relation") {
  // The reference Y-point.
  CoordsQ y0{Rat(1), Rat(1, 2), Rat(-1, 2), Rat(-1)};
  CHECK(in_y_set(y0));
  CHECK(y_polynomial(invariant_F1(y0), invariant_F2(y0)) == Rat(0));
  // Generated points.
  std::mt19937_64 rng(34);
  int found = 0;
  while (found < 3) {
    auto p = make_y_point(random_rat(rng, 60, 12), random_rat(rng, 60, 12));
    if (!p) continue;
    if ((p->a * p->b * p->c * p->d).is_zero()) continue;
    CHECK(in_y_set(*p));
    CHECK(y_polynomial(invariant_F1(*p), invariant_F2(*p)) == Rat(0));
    ++found;
  }
}
