#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "octagon/coords.hpp"
#include "octagon/error.hpp"
#include "octagon/hamiltonian.hpp"
#include "octagon/invariants.hpp"
#include "octagon/maps.hpp"

namespace octagon {

// ---------------------------------------------------------------------
// Level sets
// ---------------------------------------------------------------------

// Either (F1, F2) or (g, h) with g = F2 - F1, h = F1/F2; the two
// parametrizations interconvert exactly.
struct LevelSpec {
  double F1, F2, g, h;

  static LevelSpec from_f(double F1, double F2) {
    if (F2 == 0) throw DomainError("LevelSpec: F2 = 0");
    return {F1, F2, F2 - F1, F1 / F2};
  }
  static LevelSpec from_gh(double g, double h) {
    if (h == 1) throw DomainError("LevelSpec: h = 1 has no (F1,F2) form");
    return {g * h / (1 - h), g / (1 - h), g, h};
  }
  bool valid_for_Xplus() const { return F1 > 0 && F2 > 0 && g != 0; }
};

// ---------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------

// Coefficients for alpha1 X1 + alpha2 X2; X_G is (-1, 1).
struct FieldSpec {
  double alpha1, alpha2;
  static FieldSpec G() { return {-1.0, 1.0}; }
  static FieldSpec X1() { return {1.0, 0.0}; }
  static FieldSpec X2() { return {0.0, 1.0}; }
};

inline TangentVec<double> eval_field(const FieldSpec& f, const CoordsD& p) {
  auto x1 = field_X1(p), x2 = field_X2(p);
  TangentVec<double> v;
  for (int i = 0; i < 4; ++i) v[i] = f.alpha1 * x1[i] + f.alpha2 * x2[i];
  return v;
}

struct Trajectory {
  std::vector<std::pair<double, CoordsD>> samples;
  FieldSpec field;
  double drift = 0;            // max |F1 - F1(0)| + |F2 - F2(0)|
  bool rejected = false;       // drift above the run's tolerance
  std::optional<std::string> stop_reason;  // hyperplane guard / underflow
};

// Coordinates this close to a hyperplane stop the integration; the
// symplectic form is singular there.
constexpr double kHyperplaneGuard = 1e-10;

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DP45 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

using State = std::array<double, 4>;

inline State axpy(const State& x, double h, const State& d) {
  return {x[0] + h * d[0], x[1] + h * d[1], x[2] + h * d[2], x[3] + h * d[3]};
}

}  // namespace detail

// One adaptive step controller shared by all flow-based routines.  The
// callback sees every accepted sample and may stop the run by returning
// false.  Throws only for bad inputs; numerical trouble lands in
// stop_reason.
template <class Callback>
void rk45_run(const CoordsD& p0, const FieldSpec& field, double t_end, double rel_tol,
              double abs_tol, Trajectory& out, Callback&& on_sample) {
  using detail::State;
  using T = detail::DP45;
  auto deriv = [&](const State& s) -> State {
    CoordsD p{s[0], s[1], s[2], s[3]};
    auto v = eval_field(field, p);
    return {v[0], v[1], v[2], v[3]};
  };
  auto near_hyperplane = [](const State& s) {
    return std::abs(s[0]) < kHyperplaneGuard || std::abs(s[1]) < kHyperplaneGuard ||
           std::abs(s[2]) < kHyperplaneGuard || std::abs(s[3]) < kHyperplaneGuard;
  };

  State s{p0.a, p0.b, p0.c, p0.d};
  if (near_hyperplane(s)) throw DomainError("rk45_run: start on a coordinate hyperplane");
  double t = 0;
  out.field = field;
  out.samples.push_back({0.0, p0});
  if (!on_sample(0.0, p0) || t_end == 0) return;

  double dir = t_end > 0 ? 1.0 : -1.0;
  double h = dir * std::min(1e-3, std::abs(t_end));
  State k1 = deriv(s);
  while (dir * (t_end - t) > 0) {
    if (std::abs(h) > std::abs(t_end - t)) h = t_end - t;
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t))) {
      out.stop_reason = "step underflow at t = " + std::to_string(t);
      return;
    }
    State k2, k3, k4, k5, k6, k7, s5;
    try {
      k2 = deriv(detail::axpy(s, h * T::a21, k1));
      k3 = deriv(detail::axpy(detail::axpy(s, h * T::a31, k1), h * T::a32, k2));
      k4 = deriv(detail::axpy(detail::axpy(detail::axpy(s, h * T::a41, k1), h * T::a42, k2),
                              h * T::a43, k3));
      k5 = deriv(detail::axpy(
          detail::axpy(detail::axpy(detail::axpy(s, h * T::a51, k1), h * T::a52, k2),
                       h * T::a53, k3),
          h * T::a54, k4));
      k6 = deriv(detail::axpy(
          detail::axpy(
              detail::axpy(detail::axpy(detail::axpy(s, h * T::a61, k1), h * T::a62, k2),
                           h * T::a63, k3),
              h * T::a64, k4),
          h * T::a65, k5));
      s5 = s;
      for (int i = 0; i < 4; ++i)
        s5[i] += h * (T::b1 * k1[i] + T::b3 * k3[i] + T::b4 * k4[i] + T::b5 * k5[i] +
                      T::b6 * k6[i]);
      k7 = deriv(s5);
    } catch (const DomainError&) {
      h *= 0.5;  // stepped over a singular locus; retry shorter
      continue;
    }
    double err = 0;
    for (int i = 0; i < 4; ++i) {
      double ei = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                       T::e6 * k6[i] + T::e7 * k7[i]);
      double scale = abs_tol + rel_tol * std::max(std::abs(s[i]), std::abs(s5[i]));
      err = std::max(err, std::abs(ei) / scale);
    }
    if (err <= 1.0) {
      t += h;
      s = s5;
      k1 = k7;  // FSAL
      CoordsD p{s[0], s[1], s[2], s[3]};
      out.samples.push_back({t, p});
      if (near_hyperplane(s)) {
        out.stop_reason = "coordinate hyperplane guard at t = " + std::to_string(t);
        on_sample(t, p);
        return;
      }
      if (!on_sample(t, p)) return;
    }
    double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
}

// Adaptive RK4(5) integration of alpha1 X1 + alpha2 X2 from p0 over
// [0, t_end] (t_end may be negative).  Invariant drift is checked
// against tol; excess flags the trajectory rejected rather than lying.
inline Trajectory integrate(const CoordsD& p0, const FieldSpec& field, double t_end,
                            double tol = 1e-9, double rel_tol = 1e-10,
                            double abs_tol = 1e-12) {
  if (tol <= 0) throw DomainError("integrate: tol must be positive");
  if (std::abs(p0.a * p0.b * p0.c * p0.d) < kHyperplaneGuard)
    throw DomainError("integrate: start point outside X");
  Trajectory tr;
  double F1_0 = invariant_F1(p0), F2_0 = invariant_F2(p0);
  rk45_run(p0, field, t_end, rel_tol, abs_tol, tr, [&](double, const CoordsD& p) {
    try {
      tr.drift = std::max(tr.drift,
                          std::abs(invariant_F1(p) - F1_0) + std::abs(invariant_F2(p) - F2_0));
    } catch (const DomainError&) {
    }
    return true;
  });
  tr.rejected = tr.drift > tol;
  return tr;
}

// Endpoint of the time-t flow; convenience over integrate().
inline CoordsD flow_to(const CoordsD& p0, const FieldSpec& field, double t,
                       double rel_tol = 1e-12, double abs_tol = 1e-14) {
  Trajectory tr;
  rk45_run(p0, field, t, rel_tol, abs_tol, tr, [](double, const CoordsD&) { return true; });
  if (tr.stop_reason)
    throw DomainError("flow_to: " + *tr.stop_reason);
  return tr.samples.back().second;
}

// ---------------------------------------------------------------------
// U-crossing
// ---------------------------------------------------------------------

inline double u_defect(const CoordsD& p) { return std::max(p.a + p.b, p.c + p.d) - 1.0; }

// Follows the G-curve through p0 to its unique intersection with
// U = {max(a+b, c+d) = 1}: brackets the sign change, then bisects the
// flow time until |max(a+b,c+d) - 1| < 1e-12.
inline CoordsD find_U_crossing(const CoordsD& p0) {
  double f0 = u_defect(p0);
  if (std::abs(f0) < 1e-12) return p0;
  // Below U the field X_G pushes a+b and c+d up (mir identities), so
  // flow forward; above U flow backward.
  double dir = f0 < 0 ? 1.0 : -1.0;
  CoordsD lo = p0;
  double t_step = 0.05;
  CoordsD hi = lo;
  bool bracketed = false;
  for (int i = 0; i < 4000; ++i) {
    CoordsD next;
    try {
      next = flow_to(hi, FieldSpec::G(), dir * t_step);
    } catch (const DomainError& e) {
      throw DomainError(std::string("find_U_crossing: integration failed before bracketing: ") +
                        e.what());
    }
    if (u_defect(next) * f0 <= 0) {
      lo = hi;
      hi = next;
      bracketed = true;
      break;
    }
    hi = next;
  }
  if (!bracketed) throw DomainError("find_U_crossing: no bracket found");
  // Bisection on the flow time from lo.
  double ta = 0, tb = dir * t_step;
  for (int i = 0; i < 200; ++i) {
    double tm = (ta + tb) / 2;
    CoordsD mid = flow_to(lo, FieldSpec::G(), tm);
    double fm = u_defect(mid);
    if (std::abs(fm) < 1e-12) return mid;
    if (fm * f0 <= 0) tb = tm;
    else ta = tm;
  }
  return flow_to(lo, FieldSpec::G(), (ta + tb) / 2);
}

// ---------------------------------------------------------------------
// The nice loop
// ---------------------------------------------------------------------

// Gamma_0(c) = 16c - 16c^2 - g + cg - 16ch + 16c^2h - cgh; its roots in
// (0,1) are the c-values where the loop meets the segment c + d = 1.
inline double gamma0(double c, double g, double h) {
  return 16 * c - 16 * c * c - g + c * g - 16 * c * h + 16 * c * c * h - c * g * h;
}

inline std::pair<double, double> nice_loop_endpoints(double g, double h) {
  if (!(g > 0) || !(h > 0 && h < 1))
    throw DomainError("nice_loop_endpoints: need g > 0 and h in (0,1)");
  double A = -16 + 16 * h, B = 16 + g - 16 * h - g * h, C = -g;
  double disc = B * B - 4 * A * C;
  if (disc <= 0)
    throw DomainError("nice_loop_endpoints: nonpositive discriminant at this level");
  double r1 = (-B + std::sqrt(disc)) / (2 * A), r2 = (-B - std::sqrt(disc)) / (2 * A);
  if (r1 > r2) std::swap(r1, r2);
  if (!(r1 > 0 && r2 < 1))
    throw DomainError("nice_loop_endpoints: roots outside (0,1)");
  return {r1, r2};
}

// a(c,d;h), the solution of H(a, 1-a, c, d) = h.
template <class S>
S a_of_cd(const S& c, const S& d, const S& h) {
  S den = S(1) - c + d + h + c * h - d * h;
  if (is_zero(den)) throw DomainError("a_of_cd: denominator vanished");
  return (S(2) * d + h - c * h - d * h) / den;
}

// The quartic N(c,d) whose zero locus inside the triangle tau is the
// U_ab half of the nice loop at level (g,h).
template <class S>
S nice_loop_N(const S& c, const S& d, const S& g, const S& h) {
  S c2 = c * c, c3 = c2 * c, c4 = c3 * c;
  S d2 = d * d, d3 = d2 * d, d4 = d3 * d;
  S P = S(2) - S(4) * c + S(4) * c3 - S(2) * c4 - S(4) * d - S(4) * c2 * d + S(8) * c3 * d -
        S(4) * c * d2 - S(12) * c2 * d2 + S(4) * d3 + S(8) * c * d3 - S(2) * d4;
  return (S(1) - h) * P + c * d * g * (S(1) - c + d) + c * d * g * h * (S(1) + c - d);
}

struct NiceLoop {
  std::vector<CoordsD> points;   // closed polyline, first == last within tol
  std::array<CoordsD, 2> cusps;  // the two points with a+b = c+d = 1
  double max_level_error = 0;    // max of |G-g|, |H-h| over points
};

namespace detail {

// Newton correction of (c,d) back onto N = 0, moving along grad N.
inline bool correct_onto_N(double& c, double& d, double g, double h, double tol = 1e-13) {
  for (int it = 0; it < 50; ++it) {
    auto cc = Dual4<double>::variable(c, 0);
    auto dd = Dual4<double>::variable(d, 1);
    auto N = nice_loop_N(cc, dd, Dual4<double>(g), Dual4<double>(h));
    double val = N.value(), Nc = N.partial(0), Nd = N.partial(1);
    double g2 = Nc * Nc + Nd * Nd;
    if (g2 == 0) return false;
    if (std::abs(val) < tol * std::max(1.0, g2)) return true;
    c -= val * Nc / g2;
    d -= val * Nd / g2;
  }
  return false;
}

}  // namespace detail

// Traces the nice loop at the given level: secant predictor / Newton
// corrector continuation of N(c,d) = 0 across tau from one Gamma_0
// endpoint to the other, lifted to (a, 1-a, c, d); the U_cd half is the
// I-image.  Cusps are the two endpoint lifts.
inline NiceLoop trace_nice_loop(const LevelSpec& level, double step = 1e-2) {
  if (step <= 0) throw DomainError("trace_nice_loop: step must be positive");
  if (!level.valid_for_Xplus()) throw DomainError("trace_nice_loop: level not valid for X_+");
  double g = level.g, h = level.h;
  auto [c1, c2] = nice_loop_endpoints(g, h);

  // (c,d) continuation between the two boundary points.
  std::vector<std::pair<double, double>> arc;
  arc.push_back({c1, 1 - c1});
  // First predictor: tangent to N = 0 pointing into tau (c + d decreasing).
  {
    auto cc = Dual4<double>::variable(c1, 0);
    auto dd = Dual4<double>::variable(1 - c1, 1);
    auto N = nice_loop_N(cc, dd, Dual4<double>(g), Dual4<double>(h));
    double tx = -N.partial(1), ty = N.partial(0);
    double n = std::hypot(tx, ty);
    if (n == 0) throw DomainError("trace_nice_loop: singular start");
    tx /= n;
    ty /= n;
    if (tx + ty > 0) { tx = -tx; ty = -ty; }
    double c = c1 + step * tx, d = 1 - c1 + step * ty;
    double s = step;
    while (!detail::correct_onto_N(c, d, g, h)) {
      s /= 2;
      if (s < 1e-8) throw DomainError("trace_nice_loop: corrector divergence at start");
      c = c1 + s * tx;
      d = 1 - c1 + s * ty;
    }
    arc.push_back({c, d});
  }
  const int max_points = 200000;
  while (static_cast<int>(arc.size()) < max_points) {
    auto [pc, pd] = arc[arc.size() - 2];
    auto [cc0, cd0] = arc.back();
    double tx = cc0 - pc, ty = cd0 - pd;
    double n = std::hypot(tx, ty);
    tx /= n;
    ty /= n;
    double s = step;
    double c, d;
    for (;;) {
      c = cc0 + s * tx;
      d = cd0 + s * ty;
      if (detail::correct_onto_N(c, d, g, h)) break;
      s /= 2;
      if (s < 1e-8) throw DomainError("trace_nice_loop: corrector divergence");
    }
    // Reached the exit boundary point?
    if (std::hypot(c - c2, d - (1 - c2)) < step || c + d >= 1) break;
    arc.push_back({c, d});
  }
  if (static_cast<int>(arc.size()) >= max_points)
    throw DomainError("trace_nice_loop: continuation did not terminate");
  arc.push_back({c2, 1 - c2});

  NiceLoop loop;
  auto lift = [&](double c, double d) -> CoordsD {
    double a = a_of_cd(c, d, h);
    return {a, 1 - a, c, d};
  };
  for (auto [c, d] : arc) loop.points.push_back(lift(c, d));
  // U_cd half: the image under I.  I maps the arc's end point onto its
  // start point, so traversing the images in arc order continues the
  // polyline and closes it back at the first point.
  for (auto [c, d] : arc) {
    CoordsD p = lift(c, d);
    loop.points.push_back({p.c, p.d, p.a, p.b});
  }
  loop.cusps = {lift(c1, 1 - c1), lift(c2, 1 - c2)};
  for (const auto& p : loop.points) {
    try {
      loop.max_level_error =
          std::max({loop.max_level_error, std::abs(invariant_G(p) - g),
                    std::abs(invariant_H(p) - h)});
    } catch (const DomainError&) {
      loop.max_level_error = std::numeric_limits<double>::infinity();
    }
  }
  return loop;
}

// ---------------------------------------------------------------------
// Concavity along the nice loop (the field Y and the quantity q)
// ---------------------------------------------------------------------

// Y = (1+c-d) X1 + (1-c+d) X2, the combination tangent to the loop
// along U_ab; phi = a+b; psi = Y . grad phi.
template <class S>
S loop_psi(const CanonCoords<S>& p) {
  auto x1 = field_X1(p), x2 = field_X2(p);
  S a1 = S(1) + p.c - p.d, a2 = S(1) - p.c + p.d;
  return a1 * (x1[0] + x1[1]) + a2 * (x2[0] + x2[1]);
}

template <class S>
TangentVec<S> field_Y(const CanonCoords<S>& p) {
  auto x1 = field_X1(p), x2 = field_X2(p);
  S a1 = S(1) + p.c - p.d, a2 = S(1) - p.c + p.d;
  TangentVec<S> v;
  for (int i = 0; i < 4; ++i) v[i] = a1 * x1[i] + a2 * x2[i];
  return v;
}

// Second derivative of phi along Y at p, computed directly as
// q = sum_ij alpha_i alpha_j Q_ij with Q_ij = X_i . grad(X_j . grad phi)
// and the combination coefficients alpha = (1+c-d, 1-c+d) held at their
// values at p.  (Letting the coefficients vary differentiates psi, which
// vanishes identically along U_ab and gives the trivial zero instead of
// the curvature of phi along the loop direction.)
template <class S>
S concavity_direct(const CanonCoords<S>& p) {
  S a1 = S(1) + p.c - p.d, a2 = S(1) - p.c + p.d;
  auto second = [&](auto&& field_j) {
    // grad of (X_j . grad phi) = grad of (X_j[0] + X_j[1]) as a function
    // of the point.
    auto [val, grad] = value_and_gradient(
        [&](const auto& q) {
          auto x = field_j(q);
          return x[0] + x[1];
        },
        p);
    (void)val;
    return grad;
  };
  auto g1 = second([](const auto& q) { return field_X1(q); });
  auto g2 = second([](const auto& q) { return field_X2(q); });
  auto x1 = field_X1(p), x2 = field_X2(p);
  S Q11 = dot(x1, g1), Q12 = dot(x1, g2), Q21 = dot(x2, g1), Q22 = dot(x2, g2);
  return a1 * a1 * Q11 + a1 * a2 * (Q12 + Q21) + a2 * a2 * Q22;
}

// The closed form; valid on U_ab points (a, 1-a, c, d).
template <class S>
S concavity_closed_form(const CanonCoords<S>& p) {
  S cd = p.c * p.d;
  if (is_zero(cd)) throw DomainError("concavity_closed_form: cd = 0");
  S s1 = S(1) + p.c - p.d, s2 = S(1) - p.c + p.d;
  S diff = p.c - p.d;
  return S(8) * p.a * (S(1) - p.a) * s1 * s1 * s2 * s2 * (p.c + p.d - S(1)) *
         (p.c + p.d - diff * diff) / (cd * cd);
}

template <class S>
bool on_U_ab(const CanonCoords<S>& p) {
  return is_zero(p.a + p.b - S(1));
}

// Returns (closed form, direct second derivative); both computed, the
// caller asserts agreement.  Requires p = (a, 1-a, c, d).
template <class S>
std::pair<S, S> concavity_q(const CanonCoords<S>& p) {
  if (!on_U_ab(p)) throw DomainError("concavity_q: point not on U_ab");
  return {concavity_closed_form(p), concavity_direct(p)};
}

// ---------------------------------------------------------------------
// Reversal involutions iota_5 = A D A D A and iota_3 = A D A
// ---------------------------------------------------------------------

template <class S>
struct ReversalImages {
  CanonCoords<S> i5_image, i3_image;
  TangentVec<S> V;  // d iota_5 (X_G)
  TangentVec<S> W;  // d iota_3 (X_G)
};

template <class S>
ReversalImages<S> reversal_images(const CanonCoords<S>& p) {
  ReversalImages<S> r;
  r.i5_image = apply_word(word_iota5(), p);
  r.i3_image = apply_word(word_iota3(), p);
  auto xg = field_XG(p);
  r.V = push_forward(word_iota5(), p, xg);
  r.W = push_forward(word_iota3(), p, xg);
  return r;
}

// Both involutions negate omega and preserve G, so they push X_G to its
// negative: d iota (X_G)|_p = -X_G(iota(p)).  Checked exactly at generic
// points (the right-hand side degenerates to 0/0 on U_ab itself, where
// the pushforward stays finite).
template <class S>
bool reversal_field_identity(const CanonCoords<S>& p) {
  for (const auto& word : {word_iota5(), word_iota3()}) {
    auto v = push_forward(word, p, field_XG(p));
    auto x_img = field_XG(apply_word(word, p));
    for (int i = 0; i < 4; ++i)
      if (!is_zero(v[i] + x_img[i])) return false;
  }
  return true;
}

// iota_5(a, 1-a, c, d) = (0, beta, beta, 0).
template <class S>
S reversal_beta(const S& c, const S& d) {
  S den = (c + d) - (c - d) * (c - d);
  if (is_zero(den)) throw DomainError("reversal_beta: (c+d) = (c-d)^2");
  return (S(1) - (c + d)) / den;
}

// iota_3(a, 1-a, c, d) = (c(1-c+d)/(d(1+c-d)), ((c+d)-1)/(d(1+c-d)), 1, 0).
template <class S>
CanonCoords<S> iota3_on_Uab(const S& c, const S& d) {
  S den = d * (S(1) + c - d);
  if (is_zero(den)) throw DomainError("iota3_on_Uab: d(1+c-d) = 0");
  return {c * (S(1) - c + d) / den, ((c + d) - S(1)) / den, S(1), S(0)};
}

// Closed forms for the hyperplane-normal components of V = d iota_5 (X_G)
// and W = d iota_3 (X_G) on U_ab points (a, 1-a, c, d), with
// f = 1 - 2c + c^2 - 2d - 2cd + d^2:
//   V_1 = 2 (1-c+d) f / (d ((c+d) - (c-d)^2)),
//   V_4 = 2 (1+c-d) f / (c ((c+d) - (c-d)^2)),
//   W_4 = 4 (1-c+d) / d.
// Both V-components are a-free and share the sign of f on the region of
// interest; the ratio V_1 / V_4 = c(1-c+d) / (d(1+c-d)) is forced by the
// Jacobian of iota_5, which maps vectors tangent to U_ab into the
// hyperplane {a = d = 0} containing the image.
template <class S>
S reversal_f_factor(const S& c, const S& d) {
  return S(1) - S(2) * c + c * c - S(2) * d - S(2) * c * d + d * d;
}

template <class S>
S reversal_V1(const S& c, const S& d) {
  S den = d * ((c + d) - (c - d) * (c - d));
  if (is_zero(den)) throw DomainError("reversal_V1: denominator vanished");
  return S(2) * (S(1) - c + d) * reversal_f_factor(c, d) / den;
}

template <class S>
S reversal_V4(const S& c, const S& d) {
  S den = c * ((c + d) - (c - d) * (c - d));
  if (is_zero(den)) throw DomainError("reversal_V4: denominator vanished");
  return S(2) * (S(1) + c - d) * reversal_f_factor(c, d) / den;
}

template <class S>
S reversal_W4(const S& c, const S& d) {
  if (is_zero(d)) throw DomainError("reversal_W4: d = 0");
  return S(4) * (S(1) - c + d) / d;
}

// ---------------------------------------------------------------------
// Flat-chart translation
// ---------------------------------------------------------------------

struct ChartTranslation {
  double t1, t2;    // flow times along X1, X2
  double residual;  // max-norm of the worst shooting residual on the path
};

namespace detail {

// One shooting leg: residual of flow_{t1}^{X1}(flow_{t2}^{X2}(from)) - to.
inline std::optional<std::array<double, 4>> chart_shot(const CoordsD& from, const CoordsD& to,
                                                       double t1, double t2) {
  try {
    CoordsD q = flow_to(flow_to(from, FieldSpec::X2(), t2), FieldSpec::X1(), t1);
    return std::array<double, 4>{q.a - to.a, q.b - to.b, q.c - to.c, q.d - to.d};
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

// Damped Gauss-Newton on the 2-parameter shooting problem; suitable for
// short legs where the initial guess (0,0) is already in the basin.
inline bool chart_leg(const CoordsD& from, const CoordsD& to, double& t1, double& t2,
                      double& residual, double tol = 1e-11) {
  for (int it = 0; it < 100; ++it) {
    auto r0 = chart_shot(from, to, t1, t2);
    if (!r0) return false;
    double rmax = 0;
    for (double v : *r0) rmax = std::max(rmax, std::abs(v));
    residual = rmax;
    if (rmax < tol) return true;
    const double eps = 1e-6;
    auto rp1 = chart_shot(from, to, t1 + eps, t2), rm1 = chart_shot(from, to, t1 - eps, t2);
    auto rp2 = chart_shot(from, to, t1, t2 + eps), rm2 = chart_shot(from, to, t1, t2 - eps);
    if (!rp1 || !rm1 || !rp2 || !rm2) return false;
    double j11 = 0, j12 = 0, j22 = 0, g1 = 0, g2 = 0;
    for (int i = 0; i < 4; ++i) {
      double a = ((*rp1)[i] - (*rm1)[i]) / (2 * eps);
      double b = ((*rp2)[i] - (*rm2)[i]) / (2 * eps);
      j11 += a * a;
      j12 += a * b;
      j22 += b * b;
      g1 += a * (*r0)[i];
      g2 += b * (*r0)[i];
    }
    double det = j11 * j22 - j12 * j12;
    if (det == 0) return false;
    double d1 = (j22 * g1 - j12 * g2) / det, d2 = (j11 * g2 - j12 * g1) / det;
    double lam = 1.0, cur = 0;
    for (double v : *r0) cur += v * v;
    bool moved = false;
    for (int bt = 0; bt < 50; ++bt) {
      auto rn = chart_shot(from, to, t1 - lam * d1, t2 - lam * d2);
      if (rn) {
        double nn = 0;
        for (double v : *rn) nn += v * v;
        if (nn < cur) {
          t1 -= lam * d1;
          t2 -= lam * d2;
          moved = true;
          break;
        }
      }
      lam /= 2;
    }
    if (!moved) return false;
  }
  return false;
}

// G-flow time from p0 to its unique U-crossing; also returns the
// crossing point.
inline double crossing_time(const CoordsD& p0, CoordsD& q_out) {
  double f0 = u_defect(p0);
  if (std::abs(f0) < 1e-12) {
    q_out = p0;
    return 0;
  }
  double dir = f0 < 0 ? 1.0 : -1.0;
  const double t_step = 0.05;
  CoordsD lo = p0, hi = p0;
  double t_lo = 0, t_acc = 0;
  bool bracketed = false;
  for (int i = 0; i < 4000; ++i) {
    CoordsD next = flow_to(hi, FieldSpec::G(), dir * t_step);
    if (u_defect(next) * f0 <= 0) {
      lo = hi;
      t_lo = t_acc;
      bracketed = true;
      break;
    }
    hi = next;
    t_acc += dir * t_step;
  }
  if (!bracketed) throw DomainError("chart_translation: no U-crossing bracket");
  double ta = 0, tb = dir * t_step;
  for (int i = 0; i < 100; ++i) {
    double tm = (ta + tb) / 2;
    if (u_defect(flow_to(lo, FieldSpec::G(), tm)) * f0 <= 0) tb = tm;
    else ta = tm;
  }
  q_out = flow_to(lo, FieldSpec::G(), (ta + tb) / 2);
  return t_lo + (ta + tb) / 2;
}

}  // namespace detail

// Chart translation vector of a generator word at a base point on the
// traced loop's level set.
//
// A single long-range shot is unreliable here: the level component is
// covered by the commuting X1/X2 flows only patch-wise, and long flow
// legs approach coordinate hyperplanes where the fields blow up.  The
// translation is instead developed along a path of short shooting legs:
// base -> (march along the traced loop) -> q -> (pure G-flow leg) ->
// word(base), where q is the unique U-crossing of the G-curve through
// the word image.  In the flat chart every leg contributes its own
// (t1, t2) vector and the sum is the translation of the word.
inline ChartTranslation chart_translation(const NiceLoop& loop, const CoordsD& base,
                                          const GenWord& word) {
  if (word.empty()) return {0.0, 0.0, 0.0};
  CoordsD image = apply_word(word, base);
  if (!(image.a > 0 && image.b > 0 && image.c > 0 && image.d > 0))
    throw DomainError(
        "chart_translation: word image leaves the positive chart; "
        "not reachable by real flows");
  CoordsD q;
  double s = detail::crossing_time(image, q);

  int n = static_cast<int>(loop.points.size()) - 1;  // last point repeats the first
  if (n < 2) throw DomainError("chart_translation: traced loop too short");
  auto nearest = [&](const CoordsD& p) {
    int best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const CoordsD& s = loop.points[i];
      double d = std::max({std::abs(s.a - p.a), std::abs(s.b - p.b), std::abs(s.c - p.c),
                           std::abs(s.d - p.d)});
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    return best_i;
  };

  double T1 = 0, T2 = 0, res = 0, worst = 0;
  auto leg = [&](const CoordsD& from, const CoordsD& to) {
    double t1 = 0, t2 = 0;
    if (!detail::chart_leg(from, to, t1, t2, res))
      throw DomainError("chart_translation: shooting leg failed to converge");
    T1 += t1;
    T2 += t2;
    worst = std::max(worst, res);
  };

  int ib = nearest(base), iq = nearest(q);
  leg(base, loop.points[ib]);
  for (int i = ib; i != iq; i = (i + 1) % n) leg(loop.points[i], loop.points[(i + 1) % n]);
  leg(loop.points[iq], q);
  // Undo base -> nearest-sample detour direction: the path above runs
  // base -> sample(ib) -> ... -> q, so the accumulated vector already
  // measures base -> q.  Append the G-flow leg q -> image, whose chart
  // vector is -s * (-1, 1) because flowing the image for time s along
  // X_G = X2 - X1 reaches q.
  return {T1 + s, T2 - s, worst};
}

// Convenience overload: traces the loop for the level first.
inline ChartTranslation chart_translation(const LevelSpec& level, const CoordsD& base,
                                          const GenWord& word, double step = 1e-2) {
  NiceLoop loop = trace_nice_loop(level, step);
  return chart_translation(loop, base, word);
}

}  // namespace octagon
