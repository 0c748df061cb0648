#include "doctest.h"

#include "aprlab/norms.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace aprlab;

namespace {
Exponent E(long long num, long long den = 1) { return Exponent::from_value(Rational(num, den)); }
const Exponent INF = Exponent::infinity();

GridFunction random_function(const Grid& g, Rng& rng, double lo = -1.0, double hi = 1.0) {
  GridFunction f(g);
  for (double& x : f.values()) x = rng.uniform(lo, hi);
  return f;
}

ProductGridFunction random_product(const Grid& g1, const Grid& g2, Rng& rng) {
  ProductGridFunction f(g1, g2);
  for (double& x : f.values()) x = rng.uniform(-1.0, 1.0);
  return f;
}
}  // namespace

TEST_CASE("lp_norm basics") {
  Grid g(1, 2);
  GridFunction one(g, 1.0);
  for (auto p : {E(1), E(2), E(1, 2), INF}) CHECK(lp_norm(one, p) == doctest::Approx(1.0));

  GridFunction f(g, std::vector<double>{1, 1, 0, 0});
  CHECK(lp_norm(f, E(2)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(lp_norm(f, INF) == doctest::Approx(1.0));

  // power identity || |f|^a ||_{p/a} = ||f||_p^a for rational a, p
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    GridFunction h = random_function(g, rng);
    Rational a(rng.uniform_int(1, 6), 2);
    Rational p(rng.uniform_int(2, 8), 2);
    if (p <= a) continue;
    GridFunction ha = cw_pow(h, to_double(a));
    CHECK(lp_norm(ha, Exponent::from_value(p / a)) ==
          doctest::Approx(std::pow(lp_norm(h, Exponent::from_value(p)), to_double(a))));
  }
}

TEST_CASE("weighted and measure norms") {
  Grid g(1, 1);
  GridFunction f(g, std::vector<double>{2, 4});
  GridFunction w(g, std::vector<double>{3, 1});
  NormSpec spec{INF, &w, nullptr};
  CHECK(lp_norm(f, spec) == doctest::Approx(6.0));

  BaseMeasure mu(g, std::vector<double>{0.25, 0.75});
  CHECK(lp_norm(f, E(1), mu) == doctest::Approx(2 * 0.25 + 4 * 0.75));
}

TEST_CASE("mixed norm") {
  Grid g1(1, 2), g2(1, 3);
  Rng rng(22);

  ProductGridFunction c(g1, g2, 2.5);
  CHECK(mixed_norm(c, E(3), E(2)) == doctest::Approx(2.5));
  CHECK(mixed_norm(c, INF, INF) == doctest::Approx(2.5));

  // separability on tensors
  for (int t = 0; t < 50; ++t) {
    GridFunction a = random_function(g1, rng);
    GridFunction b = random_function(g2, rng);
    auto f = ProductGridFunction::tensor(a, b);
    for (auto [p, q] : {std::pair{E(2), E(3)}, {E(1), E(2)}, {INF, E(2)}, {E(3, 2), INF}})
      CHECK(mixed_norm(f, p, q) == doctest::Approx(lp_norm(a, p) * lp_norm(b, q)));
  }

  // p = q collapses to the flat norm on the product
  for (int t = 0; t < 50; ++t) {
    ProductGridFunction f = random_product(g1, g2, rng);
    for (auto p : {E(1), E(2), E(5, 2)}) {
      double flat = 0.0;
      double pv = p.value();
      for (double x : f.values()) x = x, flat += std::pow(std::fabs(x), pv);
      flat = std::pow(flat * g1.cell_volume() * g2.cell_volume(), 1.0 / pv);
      CHECK(mixed_norm(f, p, p) == doctest::Approx(flat).epsilon(1e-12));
    }
  }
}

TEST_CASE("mixed norm equals lp of slice norms") {
  Rng rng(23);
  Grid g1(1, 2), g2(1, 2);
  for (int t = 0; t < 100; ++t) {
    ProductGridFunction f = random_product(g1, g2, rng);
    for (auto [p, q] : {std::pair{E(2), E(3)}, {E(1, 2), E(2)}, {INF, E(1)}, {E(3), INF}}) {
      CHECK(mixed_norm(f, p, q) ==
            doctest::Approx(lp_norm(slice_norms(f, q), p)).epsilon(1e-13));
    }
  }
}

TEST_CASE("mixed norm Hoelder") {
  Rng rng(24);
  Grid g1(1, 2), g2(1, 2);
  for (int t = 0; t < 200; ++t) {
    ProductGridFunction f = random_product(g1, g2, rng);
    ProductGridFunction h = random_product(g1, g2, rng);
    ProductGridFunction prod = f;
    for (std::size_t i = 0; i < prod.values().size(); ++i) prod.values()[i] *= h.values()[i];

    // random split 1/p = 1/p1 + 1/p2, 1/q = 1/q1 + 1/q2
    Rational ip1(rng.uniform_int(1, 4), 4), ip2(rng.uniform_int(1, 4), 4);
    Rational iq1(rng.uniform_int(1, 4), 4), iq2(rng.uniform_int(1, 4), 4);
    auto p1 = Exponent::from_reciprocal(ip1), p2 = Exponent::from_reciprocal(ip2);
    auto q1 = Exponent::from_reciprocal(iq1), q2 = Exponent::from_reciprocal(iq2);
    auto p = Exponent::from_reciprocal(ip1 + ip2), q = Exponent::from_reciprocal(iq1 + iq2);

    double lhs = mixed_norm(prod, p, q);
    double rhs = mixed_norm(f, p1, q1) * mixed_norm(h, p2, q2);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("p-triangle inequality for p < 1") {
  Rng rng(25);
  Grid g(1, 3);
  for (int t = 0; t < 200; ++t) {
    GridFunction f = random_function(g, rng), h = random_function(g, rng);
    double pv = rng.uniform(0.2, 0.95);
    int den = 16;
    Rational prat(static_cast<long long>(pv * den) + 1, den);
    auto p = Exponent::from_value(prat);
    double pd = p.value();
    double lhs = std::pow(lp_norm(f + h, p), pd);
    double rhs = std::pow(lp_norm(f, p), pd) + std::pow(lp_norm(h, p), pd);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("vv_norm") {
  Grid g(1, 2);
  Rng rng(26);
  GridFunction f = random_function(g, rng);
  CHECK(vv_norm({f}, E(2), E(2)) == doctest::Approx(lp_norm(f, E(2))));

  // N equal terms at s=2 scale by sqrt(N)
  std::vector<GridFunction> copies(4, f);
  CHECK(vv_norm(copies, E(3), E(2)) == doctest::Approx(2.0 * lp_norm(f, E(3))));

  // s = inf is the cellwise sup
  GridFunction h = random_function(g, rng);
  double direct = lp_norm(cw_max(cw_abs(f), cw_abs(h)), E(2));
  CHECK(vv_norm({f, h}, E(2), INF) == doctest::Approx(direct));
}

TEST_CASE("nested sequence norm") {
  CHECK(nested_seq_norm({{-3.0}}, E(2), E(7)) == doctest::Approx(3.0));

  // p = q is the flat norm
  std::vector<std::vector<double>> a{{1, 2}, {3, 4}};
  double flat = std::sqrt(1 + 4 + 9 + 16.0);
  CHECK(nested_seq_norm(a, E(2), E(2)) == doctest::Approx(flat));

  // 2x2, p=1, q=inf: row maxima then sum
  CHECK(nested_seq_norm(a, E(1), INF) == doctest::Approx(2.0 + 4.0));
}

TEST_CASE("infinity-index Hoelder splitting for sequences of products") {
  // ( sum_j prod_i ||f_i^j||^s )^{1/s} <= prod_i ||{f_i^j}_j||_{l^{s_i}} with
  // the infinity indices split off as sups
  Rng rng(27);
  Grid g(1, 2);
  const int N = 6;
  for (int t = 0; t < 100; ++t) {
    // m = 2, s_1 = inf, s_2 = s
    double s = rng.uniform(1.2, 3.0);
    std::vector<double> n1(N), n2(N);
    for (int j = 0; j < N; ++j) {
      n1[j] = std::fabs(rng.uniform(0.1, 2.0));
      n2[j] = std::fabs(rng.uniform(0.1, 2.0));
    }
    double lhs = 0.0;
    for (int j = 0; j < N; ++j) lhs += std::pow(n1[j] * n2[j], s);
    lhs = std::pow(lhs, 1.0 / s);
    double sup1 = 0.0;
    for (int j = 0; j < N; ++j) sup1 = std::max(sup1, n1[j]);
    double sum2 = 0.0;
    for (int j = 0; j < N; ++j) sum2 += std::pow(n2[j], s);
    double rhs = sup1 * std::pow(sum2, 1.0 / s);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}
