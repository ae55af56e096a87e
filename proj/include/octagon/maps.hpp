#pragma once

#include <optional>
#include <string>
#include <vector>

#include "octagon/coords.hpp"
#include "octagon/error.hpp"
#include "octagon/invariants.hpp"

namespace octagon {

enum class Gen : char { A = 'A', Delta = 'D', I = 'I', J = 'J' };

// A word in the generators, written left-to-right, applied right-to-left.
using GenWord = std::vector<Gen>;

inline GenWord word_T3() { return {Gen::A, Gen::Delta, Gen::A, Gen::Delta}; }
inline GenWord word_T3_inv() { return {Gen::Delta, Gen::A, Gen::Delta, Gen::A}; }
inline GenWord word_iota3() { return {Gen::A, Gen::Delta, Gen::A}; }
inline GenWord word_iota5() { return {Gen::A, Gen::Delta, Gen::A, Gen::Delta, Gen::A}; }

inline std::string word_str(const GenWord& w) {
  std::string s;
  for (Gen g : w) s.push_back(static_cast<char>(g));
  return s.empty() ? "identity" : s;
}

// Accepts strings over A,D,I,J plus the aliases T3, T3i, i3, i5.
inline GenWord parse_word(const std::string& text) {
  GenWord w;
  size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 3, "T3i") == 0) {
      auto t = word_T3_inv();
      w.insert(w.end(), t.begin(), t.end());
      i += 3;
    } else if (text.compare(i, 2, "T3") == 0) {
      auto t = word_T3();
      w.insert(w.end(), t.begin(), t.end());
      i += 2;
    } else if (text.compare(i, 2, "i3") == 0) {
      auto t = word_iota3();
      w.insert(w.end(), t.begin(), t.end());
      i += 2;
    } else if (text.compare(i, 2, "i5") == 0) {
      auto t = word_iota5();
      w.insert(w.end(), t.begin(), t.end());
      i += 2;
    } else {
      switch (text[i]) {
        case 'A': w.push_back(Gen::A); break;
        case 'D': w.push_back(Gen::Delta); break;
        case 'I': w.push_back(Gen::I); break;
        case 'J': w.push_back(Gen::J); break;
        default:
          throw ParseError("parse_word: bad generator '" + std::string(1, text[i]) + "'");
      }
      ++i;
    }
  }
  return w;
}

// Float-backend guard: denominators below this magnitude count as vanished.
constexpr double kDeltaDomainGuard = 1e-14;

template <class S>
void check_nonvanishing(const S& x, const char* factor) {
  if constexpr (scalar_traits<S>::exact) {
    if (is_zero(x)) throw DomainError(std::string("Delta: ") + factor + " = 0");
  } else {
    if (std::abs(as_double(x)) < kDeltaDomainGuard)
      throw DomainError(std::string("Delta: ") + factor + " vanished (float guard)");
  }
}

template <class S>
CanonCoords<S> map_A(const CanonCoords<S>& p) {
  return {-p.b, -p.a, -p.d, -p.c};
}

template <class S>
CanonCoords<S> map_I(const CanonCoords<S>& p) {
  return {p.c, p.d, p.a, p.b};
}

template <class S>
CanonCoords<S> map_J(const CanonCoords<S>& p) {
  return {p.b, p.a, p.d, p.c};
}

template <class S>
CanonCoords<S> map_Delta(const CanonCoords<S>& p) {
  check_nonvanishing(p.a, "a");
  check_nonvanishing(p.c, "c");
  S e = p.e();
  S E = e + p.a + p.c + S(1);
  check_nonvanishing(E, "e+a+c+1");
  return {p.b * (p.c + p.d + S(1)) / (p.c * E),
          p.d * (e + p.b + p.c) / (p.c * E),
          p.d * (p.a + p.b + S(1)) / (p.a * E),
          p.b * (e + p.a + p.d) / (p.a * E)};
}

template <class S>
CanonCoords<S> apply_generator(Gen g, const CanonCoords<S>& p) {
  switch (g) {
    case Gen::A: return map_A(p);
    case Gen::I: return map_I(p);
    case Gen::J: return map_J(p);
    case Gen::Delta: return map_Delta(p);
  }
  throw DomainError("apply_generator: unreachable");
}

template <class S>
CanonCoords<S> apply_word(const GenWord& w, const CanonCoords<S>& p) {
  CanonCoords<S> q = p;
  for (size_t i = w.size(); i-- > 0;) {
    try {
      q = apply_generator(w[i], q);
    } catch (const DomainError& e) {
      throw DomainError("apply_word: generator at position " + std::to_string(i) + " of " +
                        word_str(w) + ": " + e.what());
    }
  }
  return q;
}

template <class S>
CanonCoords<S> t3(const CanonCoords<S>& p) { return apply_word(word_T3(), p); }

template <class S>
CanonCoords<S> t3_inv(const CanonCoords<S>& p) { return apply_word(word_T3_inv(), p); }

template <class S>
struct OrbitSample {
  int index;
  CanonCoords<S> coords;
  bool convex;
  S F1, F2, G;
};

template <class S>
struct OrbitScan {
  std::vector<OrbitSample<S>> samples;  // sorted by index
  std::optional<std::string> forward_stop;
  std::optional<std::string> backward_stop;
};

// P_j = T3^j(p) with invariants recomputed per step for drift monitoring.
// Domain errors stop that direction of the scan and are recorded as data.
template <class S>
OrbitScan<S> orbit_scan(const CanonCoords<S>& p, int steps_forward, int steps_backward) {
  OrbitScan<S> scan;
  auto sample = [](int idx, const CanonCoords<S>& q) {
    return OrbitSample<S>{idx, q, is_convex_point(q), invariant_F1(q), invariant_F2(q),
                          invariant_F2(q) - invariant_F1(q)};
  };
  std::vector<OrbitSample<S>> backward;
  CanonCoords<S> q = p;
  for (int j = 1; j <= steps_backward; ++j) {
    try {
      q = t3_inv(q);
      backward.push_back(sample(-j, q));
    } catch (const DomainError& e) {
      scan.backward_stop = e.what();
      break;
    }
  }
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) scan.samples.push_back(*it);
  scan.samples.push_back(sample(0, p));
  q = p;
  for (int j = 1; j <= steps_forward; ++j) {
    try {
      q = t3(q);
      scan.samples.push_back(sample(j, q));
    } catch (const DomainError& e) {
      scan.forward_stop = e.what();
      break;
    }
  }
  return scan;
}

// Sends a convex point with nonzero defects into X_+ via the chart word
// determined by the component signs: (+,+) -> identity, (+,-) -> J,
// (-,+) -> JD, (-,-) -> JDJ.  J flips the second sign only; Delta swaps
// the two mixed components and fixes the equal-sign ones, so these words
// are the shortest that land every component on (+,+).
template <class S>
std::pair<GenWord, CanonCoords<S>> to_positive_chart(const CanonCoords<S>& p) {
  if (!is_convex_point(p)) throw DomainError("to_positive_chart: point not convex");
  auto [insc, circ] = defects(p);
  int s1 = sign_of(insc), s2 = sign_of(circ);
  if (s1 == 0 || s2 == 0)
    throw DomainError("to_positive_chart: defect vanishes (inscribed or circumscribed)");
  GenWord w;
  if (s1 > 0 && s2 < 0) w = {Gen::J};
  else if (s1 < 0 && s2 > 0) w = {Gen::J, Gen::Delta};
  else if (s1 < 0 && s2 < 0) w = {Gen::J, Gen::Delta, Gen::J};
  return {w, apply_word(w, p)};
}

}  // namespace octagon
