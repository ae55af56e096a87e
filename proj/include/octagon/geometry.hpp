#pragma once

#include <array>
#include <cmath>

#include "octagon/coords.hpp"
#include "octagon/error.hpp"
#include "octagon/scalar.hpp"

namespace octagon {

template <class S>
struct Vec2 {
  S x, y;
  friend Vec2 operator+(const Vec2& u, const Vec2& v) { return {u.x + v.x, u.y + v.y}; }
  friend Vec2 operator-(const Vec2& u, const Vec2& v) { return {u.x - v.x, u.y - v.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  friend bool operator==(const Vec2& u, const Vec2& v) { return u.x == v.x && u.y == v.y; }
};

template <class S>
S cross(const Vec2<S>& u, const Vec2<S>& v) {
  return u.x * v.y - u.y * v.x;
}

// Eight plane vertices with the central symmetry v_{k+4} = -v_k.
template <class S>
struct Octagon {
  std::array<Vec2<S>, 8> v;

  Vec2<S>& operator[](int i) { return v[i & 7]; }
  const Vec2<S>& operator[](int i) const { return v[i & 7]; }
};

// Symmetry defect max |v_{k+4} + v_k| as a double, for tolerance checks.
template <class S>
double symmetry_defect(const Octagon<S>& o) {
  double worst = 0;
  for (int k = 0; k < 4; ++k) {
    Vec2<S> d = o[k + 4] + o[k];
    worst = std::max({worst, std::abs(as_double(d.x)), std::abs(as_double(d.y))});
  }
  return worst;
}

template <class S>
Octagon<S> vertices_from_coords(const CanonCoords<S>& p) {
  Octagon<S> o;
  o.v = {Vec2<S>{S(1), S(0)}, Vec2<S>{p.a, p.b}, Vec2<S>{S(0), S(1)},
         Vec2<S>{-p.d, p.c},  Vec2<S>{S(-1), S(0)}, Vec2<S>{-p.a, -p.b},
         Vec2<S>{S(0), S(-1)}, Vec2<S>{p.d, -p.c}};
  return o;
}

// Applies the unique linear map sending v0 -> (1,0), v2 -> (0,1) and
// reads the coordinates off the images of v1 and v3.
template <class S>
CanonCoords<S> normalize(const Octagon<S>& o, double symmetry_tol = 1e-9) {
  if constexpr (scalar_traits<S>::exact) {
    for (int k = 0; k < 4; ++k)
      if (!(o[k + 4] == -o[k]))
        throw DomainError("normalize: central symmetry violated");
  } else {
    if (symmetry_defect(o) > symmetry_tol)
      throw DomainError("normalize: central symmetry violated beyond tolerance");
  }
  S det = cross(o[0], o[2]);
  if (is_zero(det)) throw DomainError("normalize: v0 and v2 collinear with the origin");
  // Inverse of the matrix with columns v0, v2.
  auto apply = [&](const Vec2<S>& p) -> Vec2<S> {
    return {(o[2].y * p.x - o[2].x * p.y) / det, (o[0].x * p.y - o[0].y * p.x) / det};
  };
  Vec2<S> w1 = apply(o[1]);
  Vec2<S> w3 = apply(o[3]);
  return {w1.x, w1.y, w3.y, -w3.x};
}

template <class S>
bool is_convex(const Octagon<S>& o) {
  int expected = 0;
  for (int k = 0; k < 8; ++k) {
    Vec2<S> e1 = o[k + 1] - o[k];
    Vec2<S> e2 = o[k + 2] - o[k + 1];
    int s = sign_of(cross(e1, e2));
    if (s == 0) return false;
    if (expected == 0) expected = s;
    else if (s != expected) return false;
  }
  return true;
}

// The algebraic convexity constraints on canonical coordinates.
template <class S>
bool convex_constraints(const CanonCoords<S>& p) {
  const S one(1);
  auto pos = [](const S& x) { return sign_of(x) > 0; };
  return pos(p.a) && pos(p.b) && pos(p.c) && pos(p.d) &&
         pos(one - (p.a - p.b)) && pos(one + (p.a - p.b)) &&
         pos(one - (p.c - p.d)) && pos(one + (p.c - p.d)) &&
         pos(p.a + p.b - one) && pos(p.c + p.d - one);
}

template <class S>
bool is_convex_point(const CanonCoords<S>& p) {
  return is_convex(vertices_from_coords(p));
}

// (inscribed defect, circumscribed defect): (g_ab + g_cd, (a-b)+(c-d)).
template <class S>
std::pair<S, S> defects(const CanonCoords<S>& p) {
  if (is_zero(p.a * p.b)) throw DomainError("defects: ab = 0");
  if (is_zero(p.c * p.d)) throw DomainError("defects: cd = 0");
  S g_ab = (S(1) - p.a * p.a - p.b * p.b) / (p.a * p.b);
  S g_cd = (S(1) - p.c * p.c - p.d * p.d) / (p.c * p.d);
  return {g_ab + g_cd, (p.a - p.b) + (p.c - p.d)};
}

// Vertex j of the output is vertex 3j mod 8 of the input
// (the star-reordering 12345678 -> 14725836 in 0-indexed form).
template <class S>
Octagon<S> star_reorder(const Octagon<S>& o) {
  Octagon<S> r;
  for (int j = 0; j < 8; ++j) r.v[j] = o[(3 * j) & 7];
  return r;
}

namespace detail {

template <class S>
struct HomPoint {
  S x, y, w;
};

template <class S>
HomPoint<S> line_through(const Vec2<S>& p, const Vec2<S>& q) {
  // Cross product of (p.x,p.y,1) and (q.x,q.y,1).
  return {p.y - q.y, q.x - p.x, p.x * q.y - p.y * q.x};
}

template <class S>
HomPoint<S> meet(const HomPoint<S>& l, const HomPoint<S>& m) {
  return {l.y * m.w - l.w * m.y, l.w * m.x - l.x * m.w, l.x * m.y - l.y * m.x};
}

template <class S>
bool at_infinity(const HomPoint<S>& p, double tol = 1e-12) {
  if constexpr (scalar_traits<S>::exact) return is_zero(p.w);
  else return std::abs(as_double(p.w)) < tol;
}

}  // namespace detail

// The 3-diagonal construction: v'_k = line(v_{k+1}, v_{k+4}) meet
// line(v_{k+2}, v_{k+5}).  Geometric oracle for the coordinate formula.
template <class S>
Octagon<S> geometric_T3(const Octagon<S>& o) {
  Octagon<S> r;
  for (int k = 0; k < 8; ++k) {
    auto l1 = detail::line_through(o[k + 1], o[k + 4]);
    auto l2 = detail::line_through(o[k + 2], o[k + 5]);
    auto p = detail::meet(l1, l2);
    if (detail::at_infinity(p))
      throw DomainError("geometric_T3: parallel diagonals at vertex " + std::to_string(k));
    r.v[k] = {p.x / p.w, p.y / p.w};
  }
  return r;
}

}  // namespace octagon
