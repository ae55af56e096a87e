#pragma once

#include <array>
#include <optional>
#include <vector>

#include "octagon/coords.hpp"
#include "octagon/error.hpp"
#include "octagon/geometry.hpp"

namespace octagon {

template <class S>
S g_ab(const CanonCoords<S>& p) {
  if (is_zero(p.a * p.b)) throw DomainError("g_ab: ab = 0");
  return (S(1) - p.a * p.a - p.b * p.b) / (p.a * p.b);
}

template <class S>
S g_cd(const CanonCoords<S>& p) {
  if (is_zero(p.c * p.d)) throw DomainError("g_cd: cd = 0");
  return (S(1) - p.c * p.c - p.d * p.d) / (p.c * p.d);
}

template <class S>
S gstar_ab(const CanonCoords<S>& p) { return p.a - p.b; }

template <class S>
S gstar_cd(const CanonCoords<S>& p) { return p.c - p.d; }

// The twelve sign-tracked quantities, order frozen: the eight factors of
// F1 and F2, the two G-factors, then ab and cd.
template <class S>
std::array<S, 12> invariant_factors(const CanonCoords<S>& p) {
  const S one(1);
  S e = p.e();
  return {one + p.a - p.b, one + p.c - p.d, e + p.b - p.c, e + p.d - p.a,
          one - p.a + p.b, one - p.c + p.d, e - p.b + p.c, e - p.d + p.a,
          g_ab(p) + g_cd(p), gstar_ab(p) + gstar_cd(p),
          p.a * p.b, p.c * p.d};
}

inline const std::array<const char*, 12>& invariant_factor_names() {
  static const std::array<const char*, 12> names = {
      "1+a-b", "1+c-d", "e+b-c", "e+d-a", "1-a+b", "1-c+d", "e-b+c", "e-d+a",
      "g_ab+g_cd", "g*_ab+g*_cd", "ab", "cd"};
  return names;
}

template <class S>
S invariant_F1(const CanonCoords<S>& p) {
  S denom = p.a * p.b * p.c * p.d;
  if (is_zero(denom)) throw DomainError("F1: abcd = 0");
  const S one(1);
  S e = p.e();
  return (one + p.a - p.b) * (one + p.c - p.d) * (e + p.b - p.c) * (e + p.d - p.a) / denom;
}

template <class S>
S invariant_F2(const CanonCoords<S>& p) {
  S denom = p.a * p.b * p.c * p.d;
  if (is_zero(denom)) throw DomainError("F2: abcd = 0");
  const S one(1);
  S e = p.e();
  return (one - p.a + p.b) * (one - p.c + p.d) * (e - p.b + p.c) * (e - p.d + p.a) / denom;
}

template <class S>
S invariant_G(const CanonCoords<S>& p) {
  return S(2) * (g_ab(p) + g_cd(p)) * (gstar_ab(p) + gstar_cd(p));
}

template <class S>
S invariant_H(const CanonCoords<S>& p) {
  S f2 = invariant_F2(p);
  if (is_zero(f2)) throw DomainError("H: F2 = 0");
  return invariant_F1(p) / f2;
}

template <class S>
struct InvariantReport {
  S F1, F2, G, H, e;
  std::array<int, 12> factor_signs;
};

template <class S>
InvariantReport<S> invariant_report(const CanonCoords<S>& p) {
  if (is_zero(p.a * p.b * p.c * p.d)) throw DomainError("invariant_report: abcd = 0");
  InvariantReport<S> r;
  r.F1 = invariant_F1(p);
  r.F2 = invariant_F2(p);
  r.G = r.F2 - r.F1;
  r.H = invariant_H(p);
  r.e = p.e();
  auto fs = invariant_factors(p);
  for (int i = 0; i < 12; ++i) r.factor_signs[i] = sign_of(fs[i]);
  return r;
}

template <class S>
struct Membership {
  bool in_X = false;
  bool in_X_plus = false;
  // Component of the convex locus: (sign(g_ab+g_cd), sign(g*_ab+g*_cd)),
  // defined when the point is convex and both defects are nonzero.
  std::optional<std::pair<int, int>> component;
};

template <class S>
Membership<S> membership(const CanonCoords<S>& p) {
  if (is_zero(p.a * p.b * p.c * p.d)) throw DomainError("membership: abcd = 0");
  Membership<S> m;
  auto fs = invariant_factors(p);
  m.in_X = true;
  m.in_X_plus = true;
  for (const auto& f : fs) {
    int s = sign_of(f);
    if (s == 0) m.in_X = false;
    if (s <= 0) m.in_X_plus = false;
  }
  if (is_convex_point(p)) {
    int s1 = sign_of(fs[8]), s2 = sign_of(fs[9]);
    if (s1 != 0 && s2 != 0) m.component = std::make_pair(s1, s2);
  }
  return m;
}

// Y(F1,F2) = 512 + 216 F1 F2 + 192 (F1+F2) - 30 (F1+F2)^2 + (F1+F2)^3.
template <class S>
S y_polynomial(const S& F1, const S& F2) {
  S s = F1 + F2;
  return S(512) + S(216) * F1 * F2 + S(192) * s - S(30) * s * s + s * s * s;
}

// The 2-dimensional set where X1 and X2 are linearly dependent:
// ac+bd+1 = 0 and ac^2+ca^2+bd^2+db^2 = 0.
template <class S>
bool in_y_set(const CanonCoords<S>& p, double float_tol = 1e-10) {
  S u = p.a * p.c + p.b * p.d + S(1);
  S v = p.a * p.c * (p.a + p.c) + p.b * p.d * (p.b + p.d);
  if constexpr (scalar_traits<S>::exact) {
    return is_zero(u) && is_zero(v);
  } else {
    return std::abs(as_double(u)) < float_tol && std::abs(as_double(v)) < float_tol;
  }
}

// Constructs rational points on the Y-set: pick a, c with 1+ac != 0, set
// bd = -(1+ac) and b+d = ac(a+c)/(1+ac); keep the roots when the
// discriminant is a perfect square.
inline std::optional<CoordsQ> make_y_point(const Rat& a, const Rat& c) {
  Rat one_ac = Rat(1) + a * c;
  if (one_ac.is_zero()) return std::nullopt;
  Rat prod = -one_ac;
  Rat sum = a * c * (a + c) / one_ac;
  Rat disc = sum * sum - Rat(4) * prod;
  if (disc.sign() < 0) return std::nullopt;
  // Need sqrt(disc) rational: disc = (n/d)^2 with n^2 = num*den scaled.
  mpz_class num = disc.num(), den = disc.den();
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  Rat root(mpq_class(sn, sd));
  Rat b = (sum + root) / Rat(2);
  Rat d = (sum - root) / Rat(2);
  if (b.is_zero() || d.is_zero()) return std::nullopt;
  return CoordsQ{a, b, c, d};
}

}  // namespace octagon
