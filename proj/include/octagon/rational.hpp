#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "octagon/error.hpp"

namespace octagon {

// Exact rational scalar.  Thin value wrapper around GMP's mpq_class:
// always canonical (lowest terms, positive denominator), throws
// DomainError on division by zero instead of invoking GMP's undefined
// behaviour.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(int n) : q_(n) {}                // NOLINT: implicit on purpose
  Rat(long n) : q_(static_cast<long int>(n)) {}
  Rat(long n, long d) : q_(n, d) {
    if (d == 0) throw DomainError("Rat: zero denominator");
    q_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  double to_double() const { return q_.get_d(); }

  friend Rat operator+(const Rat& x, const Rat& y) { return Rat(mpq_class(x.q_ + y.q_)); }
  friend Rat operator-(const Rat& x, const Rat& y) { return Rat(mpq_class(x.q_ - y.q_)); }
  friend Rat operator*(const Rat& x, const Rat& y) { return Rat(mpq_class(x.q_ * y.q_)); }
  friend Rat operator/(const Rat& x, const Rat& y) {
    if (y.is_zero()) throw DomainError("Rat: division by zero");
    return Rat(mpq_class(x.q_ / y.q_));
  }
  Rat operator-() const { return Rat(mpq_class(-q_)); }

  Rat& operator+=(const Rat& y) { q_ += y.q_; return *this; }
  Rat& operator-=(const Rat& y) { q_ -= y.q_; return *this; }
  Rat& operator*=(const Rat& y) { q_ *= y.q_; return *this; }
  Rat& operator/=(const Rat& y) { *this = *this / y; return *this; }

  friend bool operator==(const Rat& x, const Rat& y) { return x.q_ == y.q_; }
  friend bool operator!=(const Rat& x, const Rat& y) { return x.q_ != y.q_; }
  friend bool operator<(const Rat& x, const Rat& y) { return x.q_ < y.q_; }
  friend bool operator<=(const Rat& x, const Rat& y) { return x.q_ <= y.q_; }
  friend bool operator>(const Rat& x, const Rat& y) { return x.q_ > y.q_; }
  friend bool operator>=(const Rat& x, const Rat& y) { return x.q_ >= y.q_; }

  // "p/q" or "p"; exact round-trip with rat_parse.
  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& x);

 private:
  mpq_class q_;
};

inline std::ostream& operator<<(std::ostream& os, const Rat& x) {
  return os << x.str();
}

inline Rat abs(const Rat& x) { return x.sign() < 0 ? -x : x; }

// Parses "[-]?digits(/digits)?" and also plain decimals like "-0.25".
inline Rat rat_parse(const std::string& text) {
  if (text.empty()) throw ParseError("rat_parse: empty string");
  auto digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string body = text;
  bool neg = false;
  if (body[0] == '-' || body[0] == '+') {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  auto slash = body.find('/');
  mpq_class q;
  if (slash != std::string::npos) {
    std::string n = body.substr(0, slash), d = body.substr(slash + 1);
    if (!digits(n) || !digits(d)) throw ParseError("rat_parse: malformed '" + text + "'");
    if (mpz_class(d) == 0) throw DomainError("rat_parse: zero denominator in '" + text + "'");
    q = mpq_class(mpz_class(n), mpz_class(d));
  } else {
    auto dot = body.find('.');
    if (dot == std::string::npos) {
      if (!digits(body)) throw ParseError("rat_parse: malformed '" + text + "'");
      q = mpq_class(mpz_class(body));
    } else {
      std::string whole = body.substr(0, dot), frac = body.substr(dot + 1);
      if (whole.empty()) whole = "0";
      if (!digits(whole) || !digits(frac)) throw ParseError("rat_parse: malformed '" + text + "'");
      mpz_class scale = 1;
      for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
      q = mpq_class(mpz_class(whole) * scale + mpz_class(frac.empty() ? "0" : frac), scale);
    }
  }
  q.canonicalize();
  if (neg) q = -q;
  return Rat(q);
}

}  // namespace octagon
