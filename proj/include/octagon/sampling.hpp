#pragma once

#include <random>

#include "octagon/coords.hpp"
#include "octagon/geometry.hpp"
#include "octagon/invariants.hpp"

namespace octagon {

// Seeded rational sampling used by randomized identity tests.  Points
// have coordinates in [-3,3] with small denominators so exact arithmetic
// stays fast.

inline Rat random_rat(std::mt19937_64& rng, long num_bound = 120, long den = 40) {
  std::uniform_int_distribution<long> dist(-num_bound, num_bound);
  return Rat(dist(rng), den);
}

// A generic rational point with all coordinates and abcd nonzero.
inline CoordsQ random_coords(std::mt19937_64& rng) {
  for (;;) {
    CoordsQ p{random_rat(rng), random_rat(rng), random_rat(rng), random_rat(rng)};
    if (!(p.a * p.b * p.c * p.d).is_zero()) return p;
  }
}

// A rational point where every tracked factor of F1, F2, G is nonzero.
inline CoordsQ random_X_coords(std::mt19937_64& rng) {
  for (;;) {
    CoordsQ p = random_coords(rng);
    bool ok = true;
    for (const auto& f : invariant_factors(p))
      if (f.is_zero()) { ok = false; break; }
    if (ok) return p;
  }
}

// A random convex point: a,b,c,d > 0, |a-b| < 1, |c-d| < 1, a+b > 1,
// c+d > 1 by rejection from (0,2)^4.
inline CoordsQ random_convex_coords(std::mt19937_64& rng, long den = 64) {
  std::uniform_int_distribution<long> dist(1, 2 * den - 1);
  for (;;) {
    CoordsQ p{Rat(dist(rng), den), Rat(dist(rng), den), Rat(dist(rng), den), Rat(dist(rng), den)};
    if (convex_constraints(p)) return p;
  }
}

// A random point of X_+ (all factors positive).
inline CoordsQ random_Xplus_coords(std::mt19937_64& rng) {
  for (;;) {
    CoordsQ p = random_convex_coords(rng);
    bool ok = true;
    for (const auto& f : invariant_factors(p))
      if (f.sign() <= 0) { ok = false; break; }
    if (ok) return p;
  }
}

}  // namespace octagon
