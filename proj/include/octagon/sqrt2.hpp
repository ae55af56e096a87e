#pragma once

#include <cmath>
#include <iosfwd>

#include "octagon/scalar.hpp"

namespace octagon {

// The field Q(sqrt 2), stored as x + y*sqrt(2) with rational x, y.
// The regular octagon class (s,s,s,s), s = sqrt(2)/2, lives here, so
// its orbit computations stay exact.
class Sqrt2 {
 public:
  Sqrt2() : x_(0), y_(0) {}
  Sqrt2(int n) : x_(n), y_(0) {}  // NOLINT
  Sqrt2(const Rat& x) : x_(x), y_(0) {}  // NOLINT
  Sqrt2(const Rat& x, const Rat& y) : x_(x), y_(y) {}

  static Sqrt2 sqrt2() { return Sqrt2(Rat(0), Rat(1)); }
  // sqrt(2)/2, the regular-octagon coordinate.
  static Sqrt2 half_sqrt2() { return Sqrt2(Rat(0), Rat(1, 2)); }

  const Rat& rational_part() const { return x_; }
  const Rat& sqrt2_part() const { return y_; }

  bool is_zero() const { return x_.is_zero() && y_.is_zero(); }

  int sign() const {
    int sx = x_.sign(), sy = y_.sign();
    if (sx == sy) return sx;        // includes 0,0
    if (sx == 0) return sy;
    if (sy == 0) return sx;
    // Opposite signs: the larger of x^2 and 2 y^2 decides.
    Rat diff = x_ * x_ - Rat(2) * y_ * y_;
    return diff.sign() > 0 ? sx : sy;
  }

  double to_double() const { return x_.to_double() + y_.to_double() * std::sqrt(2.0); }

  friend Sqrt2 operator+(const Sqrt2& u, const Sqrt2& v) {
    return Sqrt2(u.x_ + v.x_, u.y_ + v.y_);
  }
  friend Sqrt2 operator-(const Sqrt2& u, const Sqrt2& v) {
    return Sqrt2(u.x_ - v.x_, u.y_ - v.y_);
  }
  Sqrt2 operator-() const { return Sqrt2(-x_, -y_); }
  friend Sqrt2 operator*(const Sqrt2& u, const Sqrt2& v) {
    return Sqrt2(u.x_ * v.x_ + Rat(2) * u.y_ * v.y_, u.x_ * v.y_ + u.y_ * v.x_);
  }
  friend Sqrt2 operator/(const Sqrt2& u, const Sqrt2& v) {
    Rat norm = v.x_ * v.x_ - Rat(2) * v.y_ * v.y_;
    if (norm.is_zero()) throw DomainError("Sqrt2: division by zero");
    // Multiply by the conjugate.
    Sqrt2 num = u * Sqrt2(v.x_, -v.y_);
    return Sqrt2(num.x_ / norm, num.y_ / norm);
  }

  Sqrt2& operator+=(const Sqrt2& v) { return *this = *this + v; }
  Sqrt2& operator-=(const Sqrt2& v) { return *this = *this - v; }
  Sqrt2& operator*=(const Sqrt2& v) { return *this = *this * v; }
  Sqrt2& operator/=(const Sqrt2& v) { return *this = *this / v; }

  friend bool operator==(const Sqrt2& u, const Sqrt2& v) {
    return u.x_ == v.x_ && u.y_ == v.y_;
  }
  friend bool operator!=(const Sqrt2& u, const Sqrt2& v) { return !(u == v); }
  friend bool operator<(const Sqrt2& u, const Sqrt2& v) { return (u - v).sign() < 0; }
  friend bool operator>(const Sqrt2& u, const Sqrt2& v) { return (u - v).sign() > 0; }

  friend std::ostream& operator<<(std::ostream& os, const Sqrt2& u);

 private:
  Rat x_, y_;
};

inline std::ostream& operator<<(std::ostream& os, const Sqrt2& u) {
  return os << u.rational_part().str() << "+" << u.sqrt2_part().str() << "*sqrt2";
}

template <>
struct scalar_traits<Sqrt2> {
  static constexpr bool exact = true;
  static Sqrt2 from_rat(const Rat& r) { return Sqrt2(r); }
  static bool is_zero(const Sqrt2& x) { return x.is_zero(); }
  static int sign(const Sqrt2& x) { return x.sign(); }
  static double to_double(const Sqrt2& x) { return x.to_double(); }
};

}  // namespace octagon
