#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "octagon/flow.hpp"
#include "octagon/sampling.hpp"
#include "octagon/verify.hpp"

using namespace octagon;

namespace {

CoordsD loop_base(const NiceLoop& loop) {
  for (const auto& p : loop.points) {
    if (std::abs(p.a + p.b - 1.0) > 1e-6) continue;
    if (std::abs(p.a - p.c) + std::abs(p.b - p.d) < 1e-3) continue;
    bool near_cusp = false;
    for (const auto& q : loop.cusps)
      near_cusp = near_cusp || std::max({std::abs(p.a - q.a), std::abs(p.b - q.b),
                                         std::abs(p.c - q.c), std::abs(p.d - q.d)}) < 5e-2;
    if (!near_cusp) return p;
  }
  throw DomainError("no usable base point");
}

}  // namespace

TEST_CASE("LevelSpec converts between (F1,F2) and (g,h) exactly") {
  LevelSpec level = LevelSpec::from_f(3, 4);
  CHECK(level.g == 1.0);
  CHECK(level.h == 0.75);
  CHECK(level.valid_for_Xplus());
  LevelSpec back = LevelSpec::from_gh(1, 0.75);
  CHECK(back.F1 == 3.0);
  CHECK(back.F2 == 4.0);
  CHECK_THROWS_AS(LevelSpec::from_f(3, 0), DomainError);
  CHECK_THROWS_AS(LevelSpec::from_gh(1, 1), DomainError);
}

TEST_CASE("integration preserves the invariants to tight drift") {
  // A point on the bounded (3,4)-level loop, where the flows stay away
  // from the coordinate hyperplanes over short times.
  NiceLoop loop = trace_nice_loop(LevelSpec::from_f(3, 4));
  CoordsD p = loop_base(loop);
  for (auto field : {FieldSpec::X1(), FieldSpec::X2(), FieldSpec::G()}) {
    Trajectory tr = integrate(p, field, 0.05, 1e-8);
    CHECK_FALSE(tr.rejected);
    CHECK(tr.drift < 1e-9);
    CHECK(tr.samples.size() > 2);
  }
  CHECK_THROWS_AS(integrate(CoordsD{0, 1, 1, 1}, FieldSpec::G(), 1.0), DomainError);
}

TEST_CASE("flow_to is reversible to high accuracy") {
  NiceLoop loop = trace_nice_loop(LevelSpec::from_f(3, 4));
  CoordsD p = loop_base(loop);
  CoordsD q = flow_to(p, FieldSpec::G(), 0.1);
  CoordsD back = flow_to(q, FieldSpec::G(), -0.1);
  CHECK(std::abs(back.a - p.a) < 1e-10);
  CHECK(std::abs(back.b - p.b) < 1e-10);
  CHECK(std::abs(back.c - p.c) < 1e-10);
  CHECK(std::abs(back.d - p.d) < 1e-10);
}

TEST_CASE("the G-curve through an interior point crosses U once") {
  NiceLoop loop = trace_nice_loop(LevelSpec::from_f(3, 4));
  CoordsD p = flow_to(loop_base(loop), FieldSpec::G(), 0.05);
  CoordsD q = find_U_crossing(p);
  CHECK(std::abs(u_defect(q)) < 1e-10);
  // Invariants agree along the G-curve.
  CHECK(std::abs(invariant_F1(q) - invariant_F1(p)) < 1e-8);
  CHECK(std::abs(invariant_F2(q) - invariant_F2(p)) < 1e-8);
}

TEST_CASE("Gamma_0 endpoint values") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> gs(0.1, 3.0), hs(0.05, 0.95);
  for (int t = 0; t < 20; ++t) {
    double g = gs(rng), h = hs(rng);
    CHECK(gamma0(0, g, h) == -g);
    CHECK(gamma0(1, g, h) == -g * h);
  }
}

TEST_CASE("nice loop endpoints at level (3,4) are (17 +/- sqrt 33)/32") {
  LevelSpec level = LevelSpec::from_f(3, 4);
  auto [c1, c2] = nice_loop_endpoints(level.g, level.h);
  double lo = (17 - std::sqrt(33.0)) / 32, hi = (17 + std::sqrt(33.0)) / 32;
  CHECK(std::abs(c1 - lo) < 1e-12);
  CHECK(std::abs(c2 - hi) < 1e-12);
}

TEST_CASE("the traced nice loop closes, has two cusps, and is I-symmetric") {
  LevelSpec level = LevelSpec::from_f(3, 4);
  NiceLoop loop = trace_nice_loop(level);
  REQUIRE(loop.points.size() > 10);
  const CoordsD& first = loop.points.front();
  const CoordsD& last = loop.points.back();
  CHECK(std::max({std::abs(first.a - last.a), std::abs(first.b - last.b),
                  std::abs(first.c - last.c), std::abs(first.d - last.d)}) < 1e-8);
  CHECK(loop.max_level_error < 1e-8);
  // Both cusps satisfy a+b = c+d = 1.
  for (const auto& q : loop.cusps) {
    CHECK(std::abs(q.a + q.b - 1) < 1e-9);
    CHECK(std::abs(q.c + q.d - 1) < 1e-9);
  }
  // I-symmetry: the point set is invariant under (a,b,c,d) -> (c,d,a,b).
  double worst = 0;
  for (const auto& p : loop.points) {
    CoordsD ip{p.c, p.d, p.a, p.b};
    double best = 1e9;
    for (const auto& q : loop.points)
      best = std::min(best, std::max({std::abs(ip.a - q.a), std::abs(ip.b - q.b),
                                      std::abs(ip.c - q.c), std::abs(ip.d - q.d)}));
    worst = std::max(worst, best);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("concavity: closed form equals the direct second derivative and is negative") {
  std::mt19937_64 rng(52);
  int done = 0;
  while (done < 50) {
    CoordsQ p = random_Uab_coords(rng);
    try {
      auto [closed, direct] = concavity_q(p);
      CHECK(closed == direct);
      CHECK(closed.sign() < 0);
      ++done;
    } catch (const DomainError&) {
    }
  }
}

TEST_CASE("reversal maps push X_G to its negative") {
  std::mt19937_64 rng(53);
  int done = 0;
  while (done < 20) {
    CoordsQ p = random_coords(rng);
    try {
      CHECK(reversal_field_identity(p));
      ++done;
    } catch (const DomainError&) {
    }
  }
}

TEST_CASE("reversal images on U_ab match their closed forms exactly") {
  std::mt19937_64 rng(54);
  int done = 0;
  while (done < 25) {
    CoordsQ p = random_Uab_coords(rng);
    try {
      auto r = reversal_images(p);
      Rat beta = reversal_beta(p.c, p.d);
      CHECK(r.i5_image == CoordsQ{Rat(0), beta, beta, Rat(0)});
      CHECK(r.i3_image == iota3_on_Uab(p.c, p.d));
      CHECK(r.V[0] == reversal_V1(p.c, p.d));
      CHECK(r.V[3] == reversal_V4(p.c, p.d));
      CHECK(r.W[3] == reversal_W4(p.c, p.d));
      // V is a-free: its normal components depend on (c,d) only, and the
      // component ratio is fixed by the target hyperplane.
      CHECK(r.V[0] * p.d * (Rat(1) + p.c - p.d) == r.V[3] * p.c * (Rat(1) - p.c + p.d));
      ++done;
    } catch (const DomainError&) {
    }
  }
}

TEST_CASE("chart translation of T3 at level (3,4)") {
  LevelSpec level = LevelSpec::from_f(3, 4);
  NiceLoop loop = trace_nice_loop(level);
  CoordsD base = loop_base(loop);
  ChartTranslation tr = chart_translation(loop, base, word_T3());
  CHECK(tr.residual < 1e-9);
  CHECK(std::abs(tr.t2 - tr.t1) > 1e-6);  // nonzero X_G component
  // Base independence: the same word from another base gives the same vector.
  CoordsD base2 = loop.points[loop.points.size() / 3];
  ChartTranslation tr2 = chart_translation(loop, base2, word_T3());
  CHECK(std::abs(tr2.t1 - tr.t1) < 1e-9);
  CHECK(std::abs(tr2.t2 - tr.t2) < 1e-9);
  // The identity word translates by zero.
  ChartTranslation none = chart_translation(loop, base, GenWord{});
  CHECK(none.t1 == 0.0);
  CHECK(none.t2 == 0.0);
  // T3^2 maps every loop point out of the positive chart at this level, so
  // its translation is not reachable by real flows from the loop.
  CHECK_THROWS_AS(chart_translation(loop, base, parse_word("T3T3")), DomainError);
}
