#pragma once

#include "aprlab/exponents.hpp"
#include "aprlab/random.hpp"

#include <vector>

namespace aprlab::testutil {

inline Rational random_rational(Rng& rng, int max_num, int max_den) {
  int den = rng.uniform_int(1, max_den);
  int num = rng.uniform_int(1, max_num);
  return Rational(num, den);
}

// 1/r in (0, 1], i.e. 1 <= r < inf
inline Exponent random_r_entry(Rng& rng, int max_den = 8) {
  int den = rng.uniform_int(1, max_den);
  int num = rng.uniform_int(1, den);
  return Exponent::from_reciprocal(Rational(num, den));
}

// 1/p in [lo_inv, hi_inv] with a chance of hitting the bounds exactly
inline Exponent random_p_entry(Rng& rng, const Rational& lo_inv, const Rational& hi_inv) {
  int pick = rng.uniform_int(0, 9);
  if (pick == 0) return Exponent::from_reciprocal(lo_inv);
  if (pick == 1) return Exponent::from_reciprocal(hi_inv);
  // convex combination with small rational weight
  int den = rng.uniform_int(1, 8);
  int num = rng.uniform_int(0, den);
  Rational t(num, den);
  return Exponent::from_reciprocal(lo_inv + t * (hi_inv - lo_inv));
}

struct AdmissiblePair {
  ExponentVector p;
  ExponentVector r;
};

// Random (p_vec, r_vec) with r preceq_star p; rejection sampling on the
// r_{m+1}' >= p constraint.
inline AdmissiblePair random_admissible_pair(Rng& rng, std::size_t m, bool strict = false) {
  for (;;) {
    std::vector<Exponent> rs;
    for (std::size_t i = 0; i <= m; ++i) rs.push_back(random_r_entry(rng));
    std::vector<Exponent> ps;
    for (std::size_t i = 0; i < m; ++i)
      ps.push_back(random_p_entry(rng, Rational(0), rs[i].reciprocal()));
    ExponentVector p = p_vector(ps);
    ExponentVector r = r_vector(rs);
    if (strict ? prec(r, p) : preceq_star(r, p)) return {p, r};
  }
}

}  // namespace aprlab::testutil
