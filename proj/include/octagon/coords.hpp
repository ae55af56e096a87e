#pragma once

#include <array>

#include "octagon/dual.hpp"
#include "octagon/scalar.hpp"

namespace octagon {

// A point (a,b,c,d) of the moduli space of affine classes of centrally
// symmetric octagons; the canonical representative has vertices
// (1,0),(a,b),(0,1),(-d,c) and their negatives.
template <class S>
struct CanonCoords {
  S a, b, c, d;

  S e() const { return a * c + b * d; }

  std::array<S, 4> as_array() const { return {a, b, c, d}; }

  static CanonCoords from_array(const std::array<S, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
  }

  friend bool operator==(const CanonCoords& p, const CanonCoords& q) {
    return p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d;
  }

  template <class T>
  CanonCoords<T> cast() const {
    return {T(a), T(b), T(c), T(d)};
  }
};

using CoordsQ = CanonCoords<Rat>;
using CoordsD = CanonCoords<double>;

template <class T, class S>
CanonCoords<T> coords_cast(const CanonCoords<S>& p) {
  return {static_cast<T>(as_double(p.a)), static_cast<T>(as_double(p.b)),
          static_cast<T>(as_double(p.c)), static_cast<T>(as_double(p.d))};
}

inline CoordsD to_double(const CoordsQ& p) {
  return {p.a.to_double(), p.b.to_double(), p.c.to_double(), p.d.to_double()};
}

// Lifts p so each coordinate is an independent dual variable.
template <class S>
CanonCoords<Dual4<S>> lift(const CanonCoords<S>& p) {
  return {Dual4<S>::variable(p.a, 0), Dual4<S>::variable(p.b, 1),
          Dual4<S>::variable(p.c, 2), Dual4<S>::variable(p.d, 3)};
}

// Evaluates f and its exact gradient at p by dual-number evaluation.
// f must be callable on CanonCoords over any field scalar.
template <class S, class F>
std::pair<S, std::array<S, 4>> value_and_gradient(const F& f, const CanonCoords<S>& p) {
  Dual4<S> r = f(lift(p));
  return {r.value(), r.partials()};
}

template <class F>
std::pair<Rat, std::array<Rat, 4>> exact_gradient(const F& f, const CoordsQ& p) {
  return value_and_gradient(f, p);
}

}  // namespace octagon
