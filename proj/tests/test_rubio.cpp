#include "doctest.h"

#include "aprlab/norms.hpp"
#include "aprlab/operators.hpp"
#include "aprlab/rubio.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace aprlab;

namespace {

Exponent E(long long num, long long den = 1) { return Exponent::from_value(Rational(num, den)); }
const Exponent INF = Exponent::infinity();

Weight random_weight(const Grid& g, Rng& rng, double spread = 0.8) {
  GridFunction f(g);
  for (double& x : f.values()) x = std::exp(rng.uniform(-spread, spread));
  return Weight(std::move(f));
}

GridFunction random_nonneg(const Grid& g, Rng& rng) {
  GridFunction f(g);
  for (double& x : f.values()) x = rng.uniform(0.0, 2.0);
  return f;
}

}  // namespace

TEST_CASE("rdf geometric sum on constants") {
  Grid g(1, 2);
  BaseMeasure leb = BaseMeasure::lebesgue(g);
  CubeFamily fam = CubeFamily::all_discrete(g);
  PositiveOperator m = [&](const GridFunction& f) { return hl_maximal(f, leb, fam); };

  GridFunction h(g, 3.0);
  for (int K : {0, 1, 4, 16}) {
    RdFResult r = rdf_iterate(h, m, 1.0, K);
    double expect = 3.0 * (2.0 - std::pow(2.0, -K));
    for (std::size_t i = 0; i < r.majorant.size(); ++i)
      CHECK(r.majorant[i] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.certs.domination);
    CHECK(r.certs.truncated_a1);
  }

  RdFResult r0 = rdf_iterate(h, m, 2.0, 0);
  for (std::size_t i = 0; i < r0.majorant.size(); ++i) CHECK(r0.majorant[i] == 3.0);

  GridFunction neg(g, -1.0);
  CHECK_THROWS(rdf_iterate(neg, m, 1.0, 2));
  CHECK_THROWS(rdf_iterate(h, m, 0.0, 2));
}

TEST_CASE("rdf pointwise certificates hold for any positive B") {
  Rng rng(61);
  Grid g(1, 3);
  BaseMeasure leb = BaseMeasure::lebesgue(g);
  CubeFamily fam = CubeFamily::all_discrete(g);
  PositiveOperator m = [&](const GridFunction& f) { return hl_maximal(f, leb, fam); };

  for (int t = 0; t < 200; ++t) {
    GridFunction h = random_nonneg(g, rng);
    double B = rng.uniform(0.1, 5.0);
    int K = rng.uniform_int(0, 8);
    RdFResult r = rdf_iterate(h, m, B, K);
    CHECK(r.certs.domination);
    CHECK(r.certs.truncated_a1);
  }
}

TEST_CASE("rdf norm certificate with certified B") {
  Rng rng(62);
  Grid g(1, 3);
  CubeFamily fam = CubeFamily::all_discrete(g);
  BaseMeasure leb = BaseMeasure::lebesgue(g);

  for (int t = 0; t < 40; ++t) {
    Weight w = random_weight(g, rng);
    Exponent p = E(2);
    Weight u(cw_pow(w.fn(), -2.0));  // w^{-p'} with p' = 2
    BaseMeasure mu = BaseMeasure::from_density(u.fn());
    Exponent tb = E(2);  // boundedness exponent for the test
    BoundMode mode;
    mode.seed = 1000 + static_cast<std::uint64_t>(t);
    double B = maximal_norm_bound_M(tb, u, fam, mode);
    CHECK(B >= 1.0);

    PositiveOperator m = [&](const GridFunction& f) { return hl_maximal(f, leb, fam); };
    NormFunctional norm = [&](const GridFunction& f) { return lp_norm(f, tb, mu); };
    GridFunction h = random_nonneg(g, rng);
    RdFResult r = rdf_iterate(h, m, B, 16, norm);
    CHECK(r.certs.norm_ratio <= 2.0 + 1e-9);
    (void)p;
  }
}

TEST_CASE("maximal norm bounds") {
  Grid g(1, 2);
  CubeFamily fam = CubeFamily::all_discrete(g);
  Weight one = Weight::constant(g, 1.0);

  BoundMode emp;
  double be = maximal_norm_bound_M(E(2), one, fam, emp);
  CHECK(be >= 1.0);  // constants are fixed points of M

  BoundMode buck;
  buck.kind = BoundMode::Kind::Buckley;
  double bb = maximal_norm_bound_M(E(2), one, fam, buck);
  CHECK(bb == doctest::Approx(std::pow(2.0, 3) * 2.0));  // c(1,2) [1]_{A_2} = 8 * 2'

  CHECK_THROWS(maximal_norm_bound_M(E(1), one, fam, emp));

  // post-hoc audit: the certified B dominates ratios on fresh inputs
  Rng rng(63);
  BaseMeasure leb = BaseMeasure::lebesgue(g);
  Weight w = random_weight(g, rng);
  Weight u(cw_pow(w.fn(), -2.0));
  BaseMeasure mu = BaseMeasure::from_density(u.fn());
  double B = maximal_norm_bound_M(E(2), u, fam, emp);
  for (int t = 0; t < 100; ++t) {
    GridFunction h = random_nonneg(g, rng);
    double nh = lp_norm(h, E(2), mu);
    if (nh == 0.0) continue;
    double ratio = lp_norm(hl_maximal(h, leb, fam), E(2), mu) / nh;
    CHECK(ratio <= B * (1 + 1e-9));
  }
}

TEST_CASE("case 1 construction") {
  Grid g(1, 3);
  CubeFamily fam = CubeFamily::all_discrete(g);
  Rng rng(64);

  // constants in, constants out
  {
    auto res = construct_case1(Weight::constant(g, 1.0), GridFunction(g, 1.0), E(2), E(2), E(4),
                               E(4), E(4), 12, fam);
    CHECK(res.w_constant.value == doctest::Approx(1.0));
    CHECK(res.W_constant.value == doctest::Approx(1.0));
    for (const auto& c : res.certs) CHECK(c.holds(1e-9));
  }

  // zero g short-circuits
  {
    auto res = construct_case1(Weight::constant(g, 1.0), GridFunction(g, 0.0), E(2), E(2), E(4),
                               E(4), E(4), 12, fam);
    CHECK(res.short_circuit);
  }

  // seeded random instances: p=2, r=2 -> (p0, r0, q0) = (4,4,4), s = 4
  for (int t = 0; t < 60; ++t) {
    Weight w = random_weight(g, rng);
    GridFunction gg = random_nonneg(g, rng);
    BoundMode mode;
    mode.seed = 2000 + static_cast<std::uint64_t>(t);
    auto res = construct_case1(w, gg, E(2), E(2), E(4), E(4), E(4), 16, fam, mode);
    for (const auto& c : res.certs) {
      INFO(c.name, " value=", c.value, " bound=", c.bound);
      CHECK(c.holds(1e-9));
    }
    CHECK(res.W_constant.value >= 1.0);
  }

  // r0 = inf sub-branch: (p, r) = (2, 2), (p0, r0) = (inf, inf)
  for (int t = 0; t < 20; ++t) {
    Weight w = random_weight(g, rng, 0.5);
    GridFunction gg = random_nonneg(g, rng);
    auto res = construct_case1(w, gg, E(2), E(2), INF, INF, E(4), 16, fam);
    for (const auto& c : res.certs) {
      INFO(c.name, " value=", c.value, " bound=", c.bound);
      CHECK(c.holds(1e-9));
    }
  }

  // regime violations are rejected with the failing predicate
  CHECK_THROWS_WITH(construct_case1(Weight::constant(g, 1.0), GridFunction(g, 1.0), E(4), E(4),
                                    E(2), E(2), E(2), 8, fam),
                    doctest::Contains("1/s"));
  CHECK_THROWS_WITH(construct_case1(Weight::constant(g, 1.0), GridFunction(g, 1.0), E(2), E(3),
                                    E(4), E(4), E(4), 8, fam),
                    doctest::Contains("1/r - 1/r0"));
}

TEST_CASE("case 2 construction") {
  Grid g(1, 3);
  CubeFamily fam = CubeFamily::all_discrete(g);
  Rng rng(65);

  // constants
  {
    auto res = construct_case2(Weight::constant(g, 1.0), GridFunction(g, 1.0), E(4), E(4), E(2),
                               E(2), E(2), E(4), 12, fam);
    CHECK(res.W_constant.value == doctest::Approx(1.0));
    for (const auto& c : res.certs) CHECK(c.holds(1e-9));
  }

  // p0 > 1 branch on random weights at K = 16
  for (int t = 0; t < 60; ++t) {
    Weight w = random_weight(g, rng);
    GridFunction f = random_nonneg(g, rng);
    GridFunction h = case2_canonical_witness(f, E(4), E(2));
    BoundMode mode;
    mode.seed = 3000 + static_cast<std::uint64_t>(t);
    auto res = construct_case2(w, h, E(4), E(4), E(2), E(2), E(2), E(4), 16, fam, mode);
    for (const auto& c : res.certs) {
      INFO(c.name, " value=", c.value, " bound=", c.bound);
      CHECK(c.holds(1e-9));
    }
    CHECK(!res.reports.empty());
  }

  // p0 = 1 branch: p = 2 (s = p' = 2), r = 2 -> r0 = 1, q = 2 -> q0 = 1
  for (int t = 0; t < 20; ++t) {
    Weight w = random_weight(g, rng, 0.5);
    GridFunction h = random_nonneg(g, rng);
    auto res = construct_case2(w, h, E(2), E(2), E(1), E(1), E(1), E(2), 16, fam);
    for (const auto& c : res.certs) {
      INFO(c.name, " value=", c.value, " bound=", c.bound);
      CHECK(c.holds(1e-9));
    }
  }

  CHECK_THROWS(construct_case2(Weight::constant(g, 1.0), GridFunction(g, 1.0), E(4), E(4), E(2),
                               E(2), E(2), INF, 8, fam));  // q must be finite
}

TEST_CASE("case 3 construction") {
  Grid g(1, 3);
  CubeFamily fam = CubeFamily::all_discrete(g);
  Rng rng(66);

  // w = 1 with the ball covering the torus: everything constant
  {
    auto res = construct_case3(Weight::constant(g, 1.0), 0, 0.6, E(4), E(4), E(2), E(2), E(4), 12,
                               fam);
    CHECK(res.W_constant.value == doctest::Approx(1.0));
    for (const auto& c : res.certs) CHECK(c.holds(1e-9));
  }

  // ||h||_{L^1} = 1 for every (x0, tau0)
  for (int t = 0; t < 20; ++t) {
    long x0 = static_cast<long>(rng.next_u64() % 8);
    double tau0 = rng.uniform(0.02, 0.7);
    Weight w = random_weight(g, rng);
    BoundMode mode;
    mode.seed = 4000 + static_cast<std::uint64_t>(t);
    auto res =
        construct_case3(w, x0, tau0, E(4), E(4), E(2), E(2), E(4), 16, fam, mode);
    CHECK(lp_norm(res.h, E(1)) == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& c : res.certs) {
      INFO(c.name, " value=", c.value, " bound=", c.bound);
      CHECK(c.holds(1e-9));
    }
    double avg = case3_local_average(res, GridFunction(g, 1.0), w, E(4));
    CHECK(avg > 0.0);
  }

  // p0 = 1: q0 = p', gamma = 1/r0, r0/q0 = 1/(p' gamma); p = 2 -> q0 = 2
  for (int t = 0; t < 20; ++t) {
    Weight w = random_weight(g, rng, 0.5);
    auto res = construct_case3(w, 3, 0.1, E(2), E(2), E(1), E(1), E(2), 16, fam);
    for (const auto& c : res.certs) {
      INFO(c.name, " value=", c.value, " bound=", c.bound);
      CHECK(c.holds(1e-9));
    }
  }

  CHECK_THROWS(construct_case3(Weight::constant(g, 1.0), 0, 0.1, E(4), E(4), E(2), E(2), E(3), 8,
                               fam));  // 1/q0 != 1/s
}
