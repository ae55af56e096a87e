#pragma once

#include <cmath>
#include <cstdlib>

#include "octagon/rational.hpp"

namespace octagon {

// Minimal scalar traits shared by the exact and float backends.  Every
// backend scalar is a field: +,-,*,/ plus construction from small ints.

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static Rat from_rat(const Rat& r) { return r; }
  static bool is_zero(const Rat& x) { return x.is_zero(); }
  static int sign(const Rat& x) { return x.sign(); }
  static double to_double(const Rat& x) { return x.to_double(); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_rat(const Rat& r) { return r.to_double(); }
  static bool is_zero(double x) { return x == 0.0; }
  static int sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
  static double to_double(double x) { return x; }
};

template <class S>
bool is_zero(const S& x) { return scalar_traits<S>::is_zero(x); }

template <class S>
int sign_of(const S& x) { return scalar_traits<S>::sign(x); }

template <class S>
double as_double(const S& x) { return scalar_traits<S>::to_double(x); }

// Converts a rational constant into the backend scalar.
template <class S>
S from_rat(const Rat& r) { return scalar_traits<S>::from_rat(r); }

}  // namespace octagon
