#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "octagon/error.hpp"
#include "octagon/rational.hpp"

namespace octagon {

// Fixed variable universe for the whole artifact: the moduli coordinates
// a,b,c,d plus the auxiliary parameters used by level sets and planes.
inline const std::vector<std::string>& mpoly_vars() {
  static const std::vector<std::string> vars = {"a", "b", "c", "d", "g", "h",
                                                "k", "l", "t", "x", "y", "z"};
  return vars;
}

inline int var_index(const std::string& name) {
  const auto& vars = mpoly_vars();
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  throw ParseError("unknown variable '" + name + "'");
}

constexpr int kNumVars = 12;
using Expo = std::array<int16_t, kNumVars>;

// Sparse multivariate polynomial over Rat.  Terms keyed by exponent
// vector; zero coefficients are never stored.
class MPoly {
 public:
  MPoly() = default;
  MPoly(const Rat& c) {  // NOLINT
    if (!c.is_zero()) terms_[Expo{}] = c;
  }
  MPoly(int c) : MPoly(Rat(c)) {}  // NOLINT

  static MPoly var(const std::string& name, int power = 1) {
    MPoly p;
    Expo e{};
    e[var_index(name)] = static_cast<int16_t>(power);
    p.terms_[e] = Rat(1);
    return p;
  }

  const std::map<Expo, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Expo{});
  }
  Rat constant_value() const {
    if (terms_.empty()) return Rat(0);
    auto it = terms_.find(Expo{});
    return it == terms_.end() ? Rat(0) : it->second;
  }

  int degree(const std::string& name) const {
    int vi = var_index(name), deg = -1;
    for (const auto& [e, c] : terms_) deg = std::max(deg, static_cast<int>(e[vi]));
    return terms_.empty() ? -1 : deg;
  }

  friend MPoly operator+(const MPoly& p, const MPoly& q) {
    MPoly r = p;
    for (const auto& [e, c] : q.terms_) r.add_term(e, c);
    return r;
  }
  friend MPoly operator-(const MPoly& p, const MPoly& q) {
    MPoly r = p;
    for (const auto& [e, c] : q.terms_) r.add_term(e, -c);
    return r;
  }
  MPoly operator-() const {
    MPoly r;
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }
  friend MPoly operator*(const MPoly& p, const MPoly& q) {
    MPoly r;
    for (const auto& [e1, c1] : p.terms_)
      for (const auto& [e2, c2] : q.terms_) {
        Expo e{};
        for (int i = 0; i < kNumVars; ++i) e[i] = static_cast<int16_t>(e1[i] + e2[i]);
        r.add_term(e, c1 * c2);
      }
    return r;
  }
  MPoly& operator+=(const MPoly& q) { return *this = *this + q; }
  MPoly& operator-=(const MPoly& q) { return *this = *this - q; }
  MPoly& operator*=(const MPoly& q) { return *this = *this * q; }

  friend bool operator==(const MPoly& p, const MPoly& q) { return p.terms_ == q.terms_; }
  friend bool operator!=(const MPoly& p, const MPoly& q) { return !(p == q); }

  MPoly pow(int n) const {
    MPoly r(1), base = *this;
    for (; n > 0; n >>= 1) {
      if (n & 1) r *= base;
      if (n > 1) base *= base;
    }
    return r;
  }

  MPoly derivative(const std::string& name) const {
    int vi = var_index(name);
    MPoly r;
    for (const auto& [e, c] : terms_) {
      if (e[vi] == 0) continue;
      Expo e2 = e;
      e2[vi] = static_cast<int16_t>(e[vi] - 1);
      r.add_term(e2, c * Rat(e[vi]));
    }
    return r;
  }

  // Substitutes values for a subset of variables; remaining variables stay.
  MPoly substitute(const std::map<std::string, Rat>& values) const {
    std::array<std::optional<Rat>, kNumVars> assigned{};
    for (const auto& [name, v] : values) assigned[var_index(name)] = v;
    MPoly r;
    for (const auto& [e, c] : terms_) {
      Rat coeff = c;
      Expo e2 = e;
      for (int i = 0; i < kNumVars; ++i) {
        if (assigned[i] && e[i] > 0) {
          Rat pw(1);
          for (int j = 0; j < e[i]; ++j) pw *= *assigned[i];
          coeff *= pw;
          e2[i] = 0;
        }
      }
      r.add_term(e2, coeff);
    }
    return r;
  }

  Rat eval(const std::map<std::string, Rat>& values) const {
    MPoly r = substitute(values);
    if (!r.is_constant()) throw DomainError("MPoly::eval: unassigned variable remains");
    return r.constant_value();
  }

  // Coefficients as a univariate polynomial in `name`, descending degree.
  std::vector<MPoly> coeffs_desc(const std::string& name) const {
    int vi = var_index(name);
    int deg = std::max(degree(name), 0);
    std::vector<MPoly> out(deg + 1);
    for (const auto& [e, c] : terms_) {
      Expo e2 = e;
      int k = e[vi];
      e2[vi] = 0;
      out[deg - k].add_term(e2, c);
    }
    return out;
  }

  // Leading-term exact division; throws if the division is not exact.
  friend MPoly div_exact(const MPoly& p, const MPoly& q) {
    if (q.is_zero()) throw DomainError("div_exact: division by zero polynomial");
    MPoly rem = p, quot;
    auto lead_q = *q.terms_.rbegin();
    while (!rem.is_zero()) {
      auto lead_r = *rem.terms_.rbegin();
      Expo e{};
      for (int i = 0; i < kNumVars; ++i) {
        int diff = lead_r.first[i] - lead_q.first[i];
        if (diff < 0) throw DomainError("div_exact: not divisible");
        e[i] = static_cast<int16_t>(diff);
      }
      MPoly t;
      t.terms_[e] = lead_r.second / lead_q.second;
      quot += t;
      rem -= t * q;
    }
    return quot;
  }

  // Divides out the rational content and the common monomial factor.
  // Normalizes so the lexicographically-leading coefficient is positive.
  MPoly primitive_part() const {
    if (is_zero()) return *this;
    Expo gcd_e = terms_.begin()->first;
    for (const auto& [e, c] : terms_)
      for (int i = 0; i < kNumVars; ++i) gcd_e[i] = std::min(gcd_e[i], e[i]);
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& [e, c] : terms_) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), c.num().get_mpz_t());
      num_gcd = g;
      mpz_lcm(g.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
      den_lcm = g;
    }
    Rat scale(mpq_class(den_lcm, num_gcd));
    if (terms_.rbegin()->second.sign() < 0) scale = -scale;
    MPoly r;
    for (const auto& [e, c] : terms_) {
      Expo e2{};
      for (int i = 0; i < kNumVars; ++i) e2[i] = static_cast<int16_t>(e[i] - gcd_e[i]);
      r.terms_[e2] = c * scale;
    }
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest-order terms first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rat coeff = c;
      if (first) {
        if (coeff.sign() < 0) {
          os << "-";
          coeff = -coeff;
        }
      } else {
        os << (coeff.sign() < 0 ? " - " : " + ");
        if (coeff.sign() < 0) coeff = -coeff;
      }
      first = false;
      bool has_vars = e != Expo{};
      if (!has_vars || coeff != Rat(1)) {
        os << coeff.str();
        if (has_vars) os << "*";
      }
      bool first_var = true;
      for (int i = 0; i < kNumVars; ++i) {
        if (e[i] == 0) continue;
        if (!first_var) os << "*";
        first_var = false;
        os << mpoly_vars()[i];
        if (e[i] > 1) os << "^" << e[i];
      }
    }
    return os.str();
  }

  static MPoly parse(const std::string& text);

 private:
  void add_term(const Expo& e, const Rat& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_[e] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::map<Expo, Rat> terms_;
};

inline MPoly MPoly::parse(const std::string& text) {
  MPoly result;
  size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && text[i] == ' ') ++i; };
  skip_ws();
  if (i >= text.size()) throw ParseError("MPoly::parse: empty input");
  if (text.compare(i, 1, "0") == 0 && i + 1 == text.size()) return result;
  bool neg = false;
  if (text[i] == '-') { neg = true; ++i; }
  while (i < text.size()) {
    skip_ws();
    // One term: [coeff][*var[^pow]]...
    MPoly term(1);
    bool saw_factor = false;
    std::string numtok;
    while (i < text.size() && (isdigit(text[i]) || text[i] == '/' || text[i] == '.')) numtok += text[i++];
    if (!numtok.empty()) {
      term *= MPoly(rat_parse(numtok));
      saw_factor = true;
    }
    while (true) {
      skip_ws();
      if (i < text.size() && text[i] == '*') { ++i; skip_ws(); }
      if (i >= text.size() || !isalpha(text[i])) break;
      std::string name(1, text[i++]);
      int pw = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::string ptok;
        while (i < text.size() && isdigit(text[i])) ptok += text[i++];
        if (ptok.empty()) throw ParseError("MPoly::parse: missing exponent");
        pw = std::stoi(ptok);
      }
      term *= MPoly::var(name, pw);
      saw_factor = true;
    }
    if (!saw_factor) throw ParseError("MPoly::parse: malformed term in '" + text + "'");
    result += neg ? -term : term;
    skip_ws();
    if (i >= text.size()) break;
    if (text[i] == '+') { neg = false; ++i; }
    else if (text[i] == '-') { neg = true; ++i; }
    else throw ParseError("MPoly::parse: unexpected character '" + std::string(1, text[i]) + "'");
  }
  return result;
}

namespace detail {

// Fraction-free Bareiss determinant over the polynomial ring.
inline MPoly bareiss_det(std::vector<std::vector<MPoly>> m, size_t term_budget = 1000000) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return MPoly(1);
  int sign = 1;
  MPoly prev(1);
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k].is_zero()) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (!m[r][k].is_zero()) { swap_row = r; break; }
      if (swap_row < 0) return MPoly(0);
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = div_exact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
        if (m[i][j].term_count() > term_budget)
          throw DomainError("bareiss_det: term budget exceeded");
      }
      m[i][k] = MPoly(0);
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

}  // namespace detail

// Sylvester matrix of P and Q with respect to `var`: deg(Q) rows of P's
// coefficients followed by deg(P) rows of Q's, descending degree.
inline std::vector<std::vector<MPoly>> sylvester_matrix(const MPoly& P, const MPoly& Q,
                                                        const std::string& var) {
  int m = P.degree(var), n = Q.degree(var);
  if (m < 1 && n < 1) throw DomainError("sylvester: both polynomials constant in " + var);
  m = std::max(m, 0);
  n = std::max(n, 0);
  auto pc = P.coeffs_desc(var), qc = Q.coeffs_desc(var);
  int size = m + n;
  std::vector<std::vector<MPoly>> mat(size, std::vector<MPoly>(size, MPoly(0)));
  for (int r = 0; r < n; ++r)
    for (size_t j = 0; j < pc.size(); ++j) mat[r][r + j] = pc[j];
  for (int r = 0; r < m; ++r)
    for (size_t j = 0; j < qc.size(); ++j) mat[n + r][r + j] = qc[j];
  return mat;
}

// res(P, Q, var): determinant of the Sylvester matrix.  The result lives
// in the coefficient ring (the remaining variables).
inline MPoly sylvester_resultant(const MPoly& P, const MPoly& Q, const std::string& var) {
  return detail::bareiss_det(sylvester_matrix(P, Q, var));
}

// Elimination of `var` via the resultant; vanishes at the projection of
// any common zero.
inline MPoly eliminate(const MPoly& P, const MPoly& Q, const std::string& var) {
  if (P.degree(var) < 1 && Q.degree(var) < 1)
    throw DomainError("eliminate: '" + var + "' absent from both inputs");
  return sylvester_resultant(P, Q, var);
}

// Deterministic Schwartz-Zippel identity test.  Both sides are callables
// on a vector of variable values; a DomainError from either side marks
// the sample invalid and it is re-drawn.
using RatEvaluator = std::function<Rat(const std::vector<Rat>&)>;

inline bool identity_check(const RatEvaluator& lhs, const RatEvaluator& rhs, int num_vars,
                           int trials, uint64_t seed) {
  if (trials < 1) throw DomainError("identity_check: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num_dist(-1000000, 1000000);
  std::uniform_int_distribution<long> den_dist(1, 1000000);
  int done = 0;
  for (int attempt = 0; attempt < 100 * trials && done < trials; ++attempt) {
    std::vector<Rat> point(num_vars);
    for (auto& x : point) x = Rat(num_dist(rng), den_dist(rng));
    try {
      if (lhs(point) != rhs(point)) return false;
    } catch (const DomainError&) {
      continue;  // outside the common domain; resample
    }
    ++done;
  }
  if (done < trials) throw DomainError("identity_check: too few valid sample points");
  return true;
}

}  // namespace octagon
