#pragma once

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "octagon/flow.hpp"
#include "octagon/hamiltonian.hpp"
#include "octagon/invariants.hpp"
#include "octagon/maps.hpp"
#include "octagon/poncelet.hpp"
#include "octagon/sampling.hpp"
#include "octagon/sqrt2.hpp"

namespace octagon {

struct IdentityResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct VerifyOptions {
  uint64_t seed = 0;
  std::string only;           // substring filter on identity names
  bool flip_omega_sign = false;  // test hook: negates the expected pullback signs
};

// Extra sampling helpers used only by the suite --------------------------

// A point (a, 1-a, c, d) with a in (0,1), c,d > 0, c + d < 1.
inline CoordsQ random_Uab_coords(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> an(1, 63), cn(1, 126);
  for (;;) {
    Rat a(an(rng), 64);
    Rat c(cn(rng), 128), d(cn(rng), 128);
    if ((c + d) >= Rat(1)) continue;
    return {a, Rat(1) - a, c, d};
  }
}

// A circumscribed rational point (x+k, x-k, y-k, y+k).
inline CoordsQ random_circumscribed_coords(std::mt19937_64& rng) {
  for (;;) {
    Rat k = random_rat(rng, 30, 40), x = random_rat(rng, 80, 40), y = random_rat(rng, 80, 40);
    CoordsQ p{x + k, x - k, y - k, y + k};
    if (!(p.a * p.b * p.c * p.d).is_zero()) return p;
  }
}

// The suite ---------------------------------------------------------------

inline std::vector<IdentityResult> run_verify(const VerifyOptions& opt = {}) {
  std::vector<IdentityResult> results;
  auto run = [&](const std::string& name, const std::function<std::string()>& body) {
    if (!opt.only.empty() && name.find(opt.only) == std::string::npos) return;
    IdentityResult r{name, true, "ok"};
    try {
      std::string detail = body();
      if (!detail.empty()) {
        r.pass = false;
        r.detail = detail;
      }
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(r);
  };

  run("invariance-A", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 1);
    for (int i = 0; i < 100; ++i) {
      CoordsQ p = random_coords(rng);
      CoordsQ q = map_A(p);
      if (invariant_F1(p) != invariant_F1(q) || invariant_F2(p) != invariant_F2(q))
        return "F changed under A at sample " + std::to_string(i);
    }
    return "";
  });

  run("invariance-Delta", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 2);
    int done = 0;
    for (int i = 0; done < 100 && i < 10000; ++i) {
      CoordsQ p = random_coords(rng);
      CoordsQ q;
      try {
        q = map_Delta(p);
        if ((q.a * q.b * q.c * q.d).is_zero()) continue;
      } catch (const DomainError&) {
        continue;
      }
      if (invariant_F1(p) != invariant_F1(q) || invariant_F2(p) != invariant_F2(q))
        return "F changed under Delta at sample " + std::to_string(done);
      ++done;
    }
    return done < 100 ? "too few valid samples" : "";
  });

  int flip = opt.flip_omega_sign ? -1 : 1;
  run("pullback-A", [&]() -> std::string {
    return pullback_check({Gen::A}, -1 * flip, 50, opt.seed + 3) ? "" : "A*omega != -omega";
  });
  run("pullback-Delta", [&]() -> std::string {
    return pullback_check({Gen::Delta}, -1 * flip, 50, opt.seed + 4)
               ? ""
               : "Delta*omega != -omega";
  });
  run("pullback-T3", [&]() -> std::string {
    return pullback_check(word_T3(), 1 * flip, 50, opt.seed + 5) ? "" : "T3*omega != omega";
  });

  run("poisson-commute", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 6);
    int done = 0;
    for (int i = 0; done < 50 && i < 5000; ++i) {
      CoordsQ p = random_coords(rng);
      try {
        if (!poisson_bracket(p).is_zero())
          return "omega(X1, X2) != 0 at sample " + std::to_string(done);
      } catch (const DomainError&) {
        continue;
      }
      ++done;
    }
    return done < 50 ? "too few valid samples" : "";
  });

  run("fixed-values", [&]() -> std::string {
    CoordsQ p{Rat(1, 2), Rat(1, 4), Rat(1, 2), Rat(1, 4)};
    CoordsQ q = map_Delta(p);
    CoordsQ expect{Rat(14, 37), Rat(17, 74), Rat(14, 37), Rat(17, 74)};
    if (!(q == expect)) return "Delta image mismatch at the sample point";
    if (invariant_F1(p) != Rat(25, 64)) return "F1 mismatch";
    if (invariant_F2(p) != Rat(729, 64)) return "F2 mismatch";
    Rat G = invariant_F2(p) - invariant_F1(p);
    if (G != Rat(11)) return "G mismatch";
    if (invariant_G(p) != G) return "G factorization cross-check failed";
    CanonCoords<Sqrt2> reg{Sqrt2::half_sqrt2(), Sqrt2::half_sqrt2(), Sqrt2::half_sqrt2(),
                           Sqrt2::half_sqrt2()};
    if (invariant_F1(reg) != Sqrt2(4) || invariant_F2(reg) != Sqrt2(4))
      return "regular octagon invariants are not (4, 4)";
    return "";
  });

  run("mir", [&]() -> std::string {
    return mir_identities_check(50, opt.seed + 7) ? "" : "a mir identity failed";
  });

  run("field-nonvanishing", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 8);
    for (int i = 0; i < 100; ++i) {
      CoordsQ p = random_X_coords(rng);
      auto xg = field_XG(p);
      if (xg[0].is_zero() && xg[1].is_zero() && xg[2].is_zero() && xg[3].is_zero())
        return "X_G vanished at an X point, sample " + std::to_string(i);
    }
    return "";
  });

  run("mu-orthogonal", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 9);
    int done = 0;
    for (int i = 0; done < 50 && i < 5000; ++i) {
      CoordsQ p = random_coords(rng);
      try {
        if (!dot(field_XG(p), mu_vector(p)).is_zero())
          return "X_G . mu != 0 at sample " + std::to_string(done);
      } catch (const DomainError&) {
        continue;
      }
      ++done;
    }
    return done < 50 ? "too few valid samples" : "";
  });

  run("dependent-locus", [&]() -> std::string {
    if (!y_polynomial(Rat(0), Rat(-2)).is_zero()) return "Y(0,-2) != 0";
    if (y_polynomial(Rat(3), Rat(4)) != Rat(3321)) return "Y(3,4) != 3321";
    std::vector<CoordsQ> pts;
    pts.push_back(CoordsQ{Rat(1), Rat(1, 2), Rat(-1, 2), Rat(-1)});
    std::mt19937_64 rng(opt.seed + 10);
    while (pts.size() < 6) {
      auto p = make_y_point(random_rat(rng, 60, 12), random_rat(rng, 60, 12));
      if (p && !(p->a * p->b * p->c * p->d).is_zero()) pts.push_back(*p);
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      if (!in_y_set(p)) return "constructed point " + std::to_string(i) + " off the locus";
      try {
        auto w = dependence_witnesses(p);
        if (!w.all_f_zero) return "an f_uv is nonzero at sample " + std::to_string(i);
      } catch (const DomainError&) {
        continue;  // mu undefined there; the f-vanishing is the claim
      }
      if (!y_polynomial(invariant_F1(p), invariant_F2(p)).is_zero())
        return "Y(F1, F2) != 0 at sample " + std::to_string(i);
    }
    return "";
  });

  run("independence", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 11);
    for (int i = 0; i < 100; ++i) {
      CoordsQ p = random_Xplus_coords(rng);
      auto w = dependence_witnesses(p);
      if (w.all_f_zero) return "all f_uv vanished at an X+ point, sample " + std::to_string(i);
    }
    return "";
  });

  run("resultant-factorization", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 12);
    std::vector<Rat> ratios;
    int attempts = 0;
    while (ratios.size() < 3 && ++attempts < 60) {
      try {
        Rat r = h_a_ratio_at(random_rat(rng, 40, 16), random_rat(rng, 40, 16),
                             random_rat(rng, 40, 16));
        ratios.push_back(r);
      } catch (const DomainError&) {
        continue;
      }
    }
    if (ratios.size() < 3) return "could not evaluate the resultant at 3 points";
    if (ratios[0].is_zero()) return "resultant vanished identically at the samples";
    if (ratios[1] != ratios[0] || ratios[2] != ratios[0])
      return "ratio to the stated factorization is not constant";
    if (!h_a_identity()) return "symbolic resultant differs from the stated factorization";
    return "";
  });

  run("concavity", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 13);
    int done = 0;
    for (int i = 0; done < 50 && i < 5000; ++i) {
      CoordsQ p = random_Uab_coords(rng);
      Rat cf, direct;
      try {
        auto [c, d] = concavity_q(p);
        cf = c;
        direct = d;
      } catch (const DomainError&) {
        continue;
      }
      if (cf != direct)
        return "closed form disagrees with the direct second derivative at sample " +
               std::to_string(done);
      if (cf.sign() >= 0) return "q not negative at sample " + std::to_string(done);
      if (!loop_psi(p).is_zero()) return "psi != 0 on U_ab at sample " + std::to_string(done);
      ++done;
    }
    return done < 50 ? "too few valid samples" : "";
  });

  run("reversal", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 14);
    int done = 0;
    for (int i = 0; done < 20 && i < 5000; ++i) {
      CoordsQ p = random_Uab_coords(rng);
      ReversalImages<Rat> r;
      Rat beta, V1, V4, W4;
      CoordsQ i3_expect;
      bool identity_ok = false;
      try {
        r = reversal_images(p);
        beta = reversal_beta(p.c, p.d);
        V1 = reversal_V1(p.c, p.d);
        V4 = reversal_V4(p.c, p.d);
        W4 = reversal_W4(p.c, p.d);
        i3_expect = iota3_on_Uab(p.c, p.d);
        // The pushforward identity is checked off U_ab, where
        // X_G(iota(p)) is defined.
        CoordsQ generic{p.a, p.b + Rat(1, 64), p.c, p.d};
        identity_ok = reversal_field_identity(generic);
      } catch (const DomainError&) {
        continue;
      }
      CoordsQ i5_expect{Rat(0), beta, beta, Rat(0)};
      if (!(r.i5_image == i5_expect))
        return "iota5 closed form mismatch at sample " + std::to_string(done);
      if (!(r.i3_image == i3_expect))
        return "iota3 closed form mismatch at sample " + std::to_string(done);
      if (!identity_ok)
        return "d iota (X_G) != -X_G o iota at sample " + std::to_string(done);
      if (r.V[0] != V1) return "V1 closed form mismatch at sample " + std::to_string(done);
      if (r.V[3] != V4) return "V4 closed form mismatch at sample " + std::to_string(done);
      if (r.V[0].sign() != r.V[3].sign())
        return "V1 and V4 differ in sign at sample " + std::to_string(done);
      if (r.W[3] != W4) return "W4 closed form mismatch at sample " + std::to_string(done);
      if (W4.sign() <= 0) return "W4 not positive at sample " + std::to_string(done);
      ++done;
    }
    return done < 20 ? "too few valid samples" : "";
  });

  run("psi-rotation", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 15);
    int done = 0;
    for (int i = 0; done < 20 && i < 5000; ++i) {
      CoordsQ p = random_circumscribed_coords(rng);
      std::pair<Rat, Rat> before, after;
      Rat k2;
      try {
        before = psi(p);
        after = psi(t3(p));
        CoordsQ pp = t3(t3(p));
        k2 = plane_project(pp).k;
      } catch (const DomainError&) {
        continue;
      }
      if (after != times_minus_i(before))
        return "psi did not rotate by -i at sample " + std::to_string(done);
      if (k2 != -plane_project(p).k)
        return "T3^2 did not send Pi_k to Pi_-k at sample " + std::to_string(done);
      ++done;
    }
    return done < 20 ? "too few valid samples" : "";
  });

  return results;
}

inline bool all_passed(const std::vector<IdentityResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

}  // namespace octagon
