#pragma once

#include <array>

#include "octagon/error.hpp"
#include "octagon/scalar.hpp"

namespace octagon {

// Forward-mode dual number over four independent variables (a,b,c,d).
// Arithmetic carries exact first partials; with S = Rat this replaces
// symbolic differentiation everywhere a gradient is needed.
template <class S>
class Dual4 {
 public:
  Dual4() : v_(S(0)), d_{S(0), S(0), S(0), S(0)} {}
  Dual4(const S& value) : v_(value), d_{S(0), S(0), S(0), S(0)} {}  // NOLINT
  Dual4(int value) : Dual4(S(value)) {}                             // NOLINT
  Dual4(const S& value, const std::array<S, 4>& partials) : v_(value), d_(partials) {}

  // The i-th coordinate as a variable: value x, partial e_i.
  static Dual4 variable(const S& x, int i) {
    Dual4 r(x);
    r.d_[i] = S(1);
    return r;
  }

  const S& value() const { return v_; }
  const std::array<S, 4>& partials() const { return d_; }
  const S& partial(int i) const { return d_[i]; }

  friend Dual4 operator+(const Dual4& x, const Dual4& y) {
    Dual4 r(x.v_ + y.v_);
    for (int i = 0; i < 4; ++i) r.d_[i] = x.d_[i] + y.d_[i];
    return r;
  }
  friend Dual4 operator-(const Dual4& x, const Dual4& y) {
    Dual4 r(x.v_ - y.v_);
    for (int i = 0; i < 4; ++i) r.d_[i] = x.d_[i] - y.d_[i];
    return r;
  }
  Dual4 operator-() const {
    Dual4 r(-v_);
    for (int i = 0; i < 4; ++i) r.d_[i] = -d_[i];
    return r;
  }
  friend Dual4 operator*(const Dual4& x, const Dual4& y) {
    Dual4 r(x.v_ * y.v_);
    for (int i = 0; i < 4; ++i) r.d_[i] = x.d_[i] * y.v_ + x.v_ * y.d_[i];
    return r;
  }
  friend Dual4 operator/(const Dual4& x, const Dual4& y) {
    if (is_zero(y.v_)) throw DomainError("Dual4: division by zero");
    S q = x.v_ / y.v_;
    Dual4 r(q);
    for (int i = 0; i < 4; ++i) r.d_[i] = (x.d_[i] - q * y.d_[i]) / y.v_;
    return r;
  }

  Dual4& operator+=(const Dual4& y) { return *this = *this + y; }
  Dual4& operator-=(const Dual4& y) { return *this = *this - y; }
  Dual4& operator*=(const Dual4& y) { return *this = *this * y; }
  Dual4& operator/=(const Dual4& y) { return *this = *this / y; }

  friend bool operator==(const Dual4& x, const Dual4& y) {
    return x.v_ == y.v_ && x.d_ == y.d_;
  }

 private:
  S v_;
  std::array<S, 4> d_;
};

template <class S>
struct scalar_traits<Dual4<S>> {
  static constexpr bool exact = scalar_traits<S>::exact;
  static Dual4<S> from_rat(const Rat& r) { return Dual4<S>(scalar_traits<S>::from_rat(r)); }
  static bool is_zero(const Dual4<S>& x) { return scalar_traits<S>::is_zero(x.value()); }
  static int sign(const Dual4<S>& x) { return scalar_traits<S>::sign(x.value()); }
  static double to_double(const Dual4<S>& x) { return scalar_traits<S>::to_double(x.value()); }
};

}  // namespace octagon
