#include "aprlab/rubio.hpp"

#include "aprlab/norms.hpp"
#include "aprlab/operators.hpp"
#include "aprlab/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aprlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// p' = p/(p-1) as an exact rational; p = inf gives 1
Rational prime_value(const Exponent& p) {
  Rational inv = p.reciprocal();
  require(inv < 1, "conjugate needs p > 1");
  return Rational(1) / (Rational(1) - inv);
}

double empirical_norm(const PositiveOperator& op, const NormFunctional& norm, const Grid& g,
                      const BoundMode& mode) {
  double worst = 1.0;
  for (int t = 0; t < mode.trials; ++t) {
    Rng rng(mix_seed(mode.seed, static_cast<std::uint64_t>(t)));
    GridFunction h(g);
    for (double& x : h.values()) x = rng.uniform(0.0, 1.0);
    if (rng.coin()) {
      long cell = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(g.cell_count()));
      h[static_cast<std::size_t>(cell)] += rng.uniform(1.0, 8.0);
    }
    for (int it = 0; it <= mode.power_iters; ++it) {
      double nh = norm(h);
      if (!(nh > 0.0) || !std::isfinite(nh)) break;
      GridFunction mh = op(h);
      worst = std::max(worst, norm(mh) / nh);
      double peak = mh.max();
      if (!(peak > 0.0)) break;
      mh *= 1.0 / peak;
      h = std::move(mh);
    }
  }
  return worst;
}

double bound_for_maximal(const Exponent& t, const Weight& sigma, const CubeFamily& fam,
                         const BoundMode& mode, const PositiveOperator& op,
                         const NormFunctional& norm) {
  require(!t.is_infinity() && t.reciprocal() < 1,
          "maximal bound needs an exponent t > 1 (the proofs use p'gamma = 1 + p'/r > 1)");
  if (mode.kind == BoundMode::Kind::Buckley) {
    // crude constant for the periodic discrete family; generous at d <= 2
    double tv = t.value();
    double tprime = tv / (tv - 1.0);
    double c = std::pow(2.0, sigma.grid().dim + 2) * tprime;
    BaseMeasure leb = BaseMeasure::lebesgue(sigma.grid());
    double at = ap_constant(sigma, t, leb, fam).value;
    return c * std::pow(at, 1.0 / (tv - 1.0));
  }
  return empirical_norm(op, norm, sigma.grid(), mode) * mode.safety;
}

}  // namespace

double maximal_norm_bound_M(const Exponent& t, const Weight& u, const CubeFamily& fam,
                            const BoundMode& mode) {
  BaseMeasure leb = BaseMeasure::lebesgue(u.grid());
  BaseMeasure mu = BaseMeasure::from_density(u.fn());
  PositiveOperator op = [&, leb](const GridFunction& h) { return hl_maximal(h, leb, fam); };
  NormFunctional norm = [&, mu, t](const GridFunction& h) { return lp_norm(h, t, mu); };
  return bound_for_maximal(t, u, fam, mode, op, norm);
}

double maximal_norm_bound_Mprime(const Exponent& t, const Weight& u, const CubeFamily& fam,
                                 const BoundMode& mode) {
  double tv = t.value();
  Weight sigma = u.pow(1.0 - tv / (tv - 1.0));
  Rational tprime = Rational(1) / (Rational(1) - (Rational(1) / t.value_exact()));
  // M' on L^{t'}(u) has the same norm as M on L^{t'}(sigma)
  BaseMeasure leb = BaseMeasure::lebesgue(u.grid());
  BaseMeasure mu = BaseMeasure::from_density(u.fn());
  GridFunction uf = u.fn();
  PositiveOperator op = [&, leb, uf](const GridFunction& h) {
    return hl_maximal(h * uf, leb, fam) * cw_inv(uf);
  };
  Exponent tp = Exponent::from_value(tprime);
  NormFunctional norm = [&, mu, tp](const GridFunction& h) { return lp_norm(h, tp, mu); };
  return bound_for_maximal(tp, sigma, fam, mode, op, norm);
}

RdFResult rdf_iterate(const GridFunction& h, const PositiveOperator& M, double B, int K,
                      const NormFunctional& norm) {
  require(B > 0.0, "rdf_iterate needs B > 0");
  require(K >= 0, "rdf_iterate needs K >= 0");
  for (double x : h.values()) require(x >= 0.0, "rdf_iterate needs a nonnegative input");

  RdFResult out{h, h, B, K, 0.0, {}};
  GridFunction term = h;
  double scale = 1.0;
  for (int k = 1; k <= K + 1; ++k) {
    term = M(term);
    scale /= (2.0 * B);
    if (k <= K) {
      out.majorant += scale * term;
      out.majorant_next = out.majorant;
    } else {
      out.majorant_next = out.majorant + scale * term;
    }
  }
  double hmax = h.max();
  out.tail_bound = (2.0 * B / (2.0 * B - 1.0)) * hmax * std::pow(2.0 * B, -K);

  out.certs.domination = true;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (out.majorant[i] < h[i] * (1.0 - 1e-12)) out.certs.domination = false;

  GridFunction mmaj = M(out.majorant);
  out.certs.truncated_a1 = true;
  double a1r = 0.0, tailr = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (mmaj[i] > 2.0 * B * out.majorant_next[i] * (1.0 + 1e-12))
      out.certs.truncated_a1 = false;
    double denom = out.majorant[i];
    if (denom > 0.0) {
      a1r = std::max(a1r, mmaj[i] / denom);
      tailr = std::max(tailr, (out.majorant_next[i] - denom) / denom);
    } else if (mmaj[i] > 0.0 || out.majorant_next[i] > 0.0) {
      a1r = kInf;
      tailr = kInf;
    }
  }
  out.certs.a1_pointwise_ratio = a1r;
  out.certs.tail_ratio = tailr;
  if (norm) {
    double nh = norm(h);
    out.certs.norm_ratio = nh > 0.0 ? norm(out.majorant) / nh : 0.0;
  }
  return out;
}

namespace {

struct CaseContext {
  Rational inv_p, inv_r, inv_p0, inv_r0, inv_q0, inv_s;
  Rational gamma_val;   // 1/r + 1/p'
  Rational pprime;      // p'
  Rational t;           // p' gamma, the boundedness exponent
  BaseMeasure leb;
  explicit CaseContext(const Grid& g) : leb(BaseMeasure::lebesgue(g)) {}
};

CaseContext make_context(const Weight& w, const Exponent& p, const Exponent& r,
                         const Exponent& p0, const Exponent& r0, const Exponent& q0) {
  CaseContext c(w.grid());
  c.inv_p = p.reciprocal();
  c.inv_r = r.reciprocal();
  c.inv_p0 = p0.reciprocal();
  c.inv_r0 = r0.reciprocal();
  c.inv_q0 = q0.reciprocal();
  require(c.inv_p0 <= 1, "1 <= p0 <= inf required");
  require(c.inv_p < 1, "target exponent needs p > 1");
  Rational gamma0 = c.inv_r0 + (Rational(1) - c.inv_p0);
  require(gamma0 != 0, "gamma_{p0,r0} = 0 (p0 = 1, r0 = inf): nothing to prove");
  c.gamma_val = c.inv_r + (Rational(1) - c.inv_p);
  c.pprime = prime_value(p);
  c.t = c.pprime * c.gamma_val;
  return c;
}

bool dominates(const GridFunction& big, const GridFunction& small) {
  for (std::size_t i = 0; i < big.size(); ++i)
    if (big[i] < small[i] * (1.0 - 1e-12)) return false;
  return true;
}

void check_identity(const GridFunction& a, const GridFunction& b, const std::string& what) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-9 * std::max({1.0, std::fabs(a[i]), std::fabs(b[i])}))
      throw std::logic_error("identity violated: " + what);
}

// [F]_{A_1} over the family, infinite when F touches zero
double a1_of(const GridFunction& f, const BaseMeasure& leb, const CubeFamily& fam) {
  if (f.min() <= 0.0) return kInf;
  return ap_constant(Weight(f), Exponent::from_value(1), leb, fam).value;
}

}  // namespace

OffdiagConstruction construct_case1(const Weight& w, const GridFunction& g, const Exponent& p,
                                    const Exponent& r, const Exponent& p0, const Exponent& r0,
                                    const Exponent& q0, int K, const CubeFamily& fam,
                                    const BoundMode& mode) {
  CaseContext c = make_context(w, p, r, p0, r0, q0);
  c.inv_s = c.inv_p - c.inv_p0;
  require(c.inv_s > 0, "case 1 regime needs 1/s = 1/p - 1/p0 > 0");
  require(c.inv_r - c.inv_r0 == c.inv_s, "case 1 regime needs 1/r - 1/r0 = 1/p - 1/p0");
  require(c.inv_r > 0, "case 1 target needs r < inf");
  // bookkeeping from the proof
  Rational pv = Rational(1) / c.inv_p;
  require(Rational(1) - pv * c.inv_s == pv * c.inv_p0, "exponent bookkeeping 1 - p/s = p/p0");
  if (c.inv_r0 == 0) {
    require(c.inv_s == c.inv_r, "r0 = inf forces s = r");
    Rational p0prime_inv = Rational(1) - c.inv_p0;
    require(c.gamma_val == p0prime_inv, "r0 = inf forces gamma = 1/p0'");
    require(Rational(1) + c.pprime * c.inv_s == c.pprime * p0prime_inv,
            "r0 = inf forces 1 + p'/s = p'/p0'");
  }

  OffdiagConstruction out{1,     GridFunction(w.grid()),
                          GridFunction(w.grid()),
                          Weight::constant(w.grid(), 1.0),
                          1.0,   K,
                          {},    {},
                          {},    {},
                          false, {{0, 0}, 1}};
  out.w_constant = apr_constant(w, p, r, c.leb, fam);

  GridFunction wp = cw_pow(w.fn(), to_double(c.pprime));
  GridFunction gw = cw_abs(g) * w.fn();
  double ng = lp_norm(gw, p);
  require(std::isfinite(ng), "||g w||_{L^p} must be finite");
  if (ng == 0.0) {
    out.short_circuit = true;
    out.W = w;
    return out;
  }
  out.h = cw_abs(g) * wp * (1.0 / ng);

  Weight u(cw_pow(w.fn(), -to_double(c.pprime)));  // w^{-p'}
  BaseMeasure mu_u = BaseMeasure::from_density(u.fn());
  out.B = maximal_norm_bound_Mprime(Exponent::from_value(c.t), u, fam, mode);

  GridFunction uf = u.fn();
  PositiveOperator mprime = [&, uf](const GridFunction& fn) {
    return hl_maximal(fn * uf, c.leb, fam) * cw_inv(uf);
  };
  Rational e = c.inv_r / (c.inv_p * c.gamma_val);  // p/(r gamma) = (p' gamma)'-scaling
  Exponent rgamma = Exponent::from_value(c.gamma_val / c.inv_r);
  NormFunctional vnorm = [&, mu_u, rgamma](const GridFunction& fn) {
    return lp_norm(fn, rgamma, mu_u);
  };
  GridFunction phi = cw_pow(out.h, to_double(e));
  RdFResult rdf = rdf_iterate(phi, mprime, out.B, K, vnorm);
  out.H = cw_pow(rdf.majorant, 1.0 / to_double(e));

  GridFunction big = cw_pow(out.H, -to_double(pv * c.inv_s)) *
                     cw_pow(w.fn(), to_double(Rational(1) + c.pprime * c.inv_s));
  out.W = Weight(big);
  out.W_constant = apr_constant(out.W, p0, r0, c.leb, fam);

  out.certs.push_back({"h <= H", dominates(out.H, out.h) ? 0.0 : 1.0, 0.0});
  out.certs.push_back({"||H||_{L^p(w^{-p'})} <~ 1",
                       lp_norm(out.H, p, mu_u), std::pow(2.0, 1.0 / to_double(e))});
  GridFunction F = rdf.majorant * u.fn();  // H^{p/(r gamma)} w^{-p'}
  double a1 = a1_of(F, c.leb, fam);
  double slack = 1.0 + rdf.certs.tail_ratio;
  out.certs.push_back({"[H^{p/(r gamma)} w^{-p'}]_{A_1} <= 2||M'|| (truncation slack)", a1,
                       2.0 * out.B * slack});
  out.reports.emplace_back("rdf_norm_ratio", rdf.certs.norm_ratio);
  out.reports.emplace_back("rdf_tail_bound", rdf.tail_bound);

  if (c.inv_r0 == 0) {
    Rational p0prime = Rational(1) / (Rational(1) - c.inv_p0);
    check_identity(cw_pow(big, -to_double(p0prime)), F, "W^{-p0'} = H^{p/(r gamma)} w^{-p'}");
    out.certs.push_back({"[W]_{A_{p0,inf}} <= [F]_{A_1}^{1/p0'}", out.W_constant.value,
                         std::pow(a1, 1.0 / to_double(p0prime))});
  } else {
    double rg_over_s = to_double(c.gamma_val / c.inv_r * c.inv_s);
    double r_over_r0 = to_double(c.inv_r0 / c.inv_r);
    out.certs.push_back({"[W]_{A_{p0,r0}} <= [F]_{A_1}^{r gamma/s} [w]_{A_{p,r}}^{r/r0}",
                         out.W_constant.value,
                         std::pow(a1, rg_over_s) * std::pow(out.w_constant.value, r_over_r0)});
  }
  return out;
}

GridFunction case2_canonical_witness(const GridFunction& f, const Exponent& q,
                                     const Exponent& q0) {
  require(!q.is_infinity() && !q0.is_infinity(), "case 2 witness needs q, q0 < inf");
  return cw_pow(f, q.value() - q0.value());
}

OffdiagConstruction construct_case2(const Weight& w, const GridFunction& h_in, const Exponent& p,
                                    const Exponent& r, const Exponent& p0, const Exponent& r0,
                                    const Exponent& q0, const Exponent& q, int K,
                                    const CubeFamily& fam, const BoundMode& mode) {
  CaseContext c = make_context(w, p, r, p0, r0, q0);
  Rational inv_q = q.reciprocal();
  c.inv_s = c.inv_p0 - c.inv_p;
  require(c.inv_s > 0, "case 2 regime needs 1/s = 1/p0 - 1/p > 0");
  require(c.inv_q0 - inv_q == c.inv_s, "case 2 regime needs 1/q0 - 1/q = 1/p0 - 1/p");
  require(c.inv_r0 - c.inv_r == c.inv_s, "case 2 regime needs 1/r0 - 1/r = 1/p0 - 1/p");
  require(inv_q > 0, "case 2 needs q < inf");
  require(c.inv_r > 0, "case 2 target needs r < inf");

  Rational qv = Rational(1) / inv_q;
  Rational q0v = Rational(1) / c.inv_q0;
  Rational sv = Rational(1) / c.inv_s;
  bool p0_one = (c.inv_p0 == 1);
  Rational a = sv / (c.pprime * q0v * c.gamma_val);       // s/(p' q0 gamma)
  Rational b = (c.pprime + qv) / (c.pprime * c.gamma_val);  // (p'+q)/(p' gamma)
  if (p0_one) {
    Rational r0v = Rational(1) / c.inv_r0;
    require(sv == c.pprime, "p0 = 1 forces s = p'");
    require(c.gamma_val == c.inv_r0, "p0 = 1 forces gamma = 1/r0");
    require(a == r0v / q0v, "p0 = 1 forces s/(p' q0 gamma) = r0/q0");
    require(b == r0v * qv / q0v, "p0 = 1 forces (p'+q)/(p' gamma) = r0 q/q0");
  } else {
    Rational r0v = Rational(1) / c.inv_r0;
    Rational p0prime = Rational(1) / (Rational(1) - c.inv_p0);
    Rational lhs = Rational(1) - r0v * c.pprime * c.gamma_val * c.inv_s;
    Rational rhs = (r0v * c.pprime) * c.inv_r / p0prime;
    require(lhs == rhs, "side condition 1 - r0 p' gamma / s = r0 p' / (r p0')");
    require(lhs > 0 && lhs < 1, "side condition 0 < r0 p' gamma / s < 1");
  }

  OffdiagConstruction out{2,     GridFunction(w.grid()),
                          GridFunction(w.grid()),
                          Weight::constant(w.grid(), 1.0),
                          1.0,   K,
                          {},    {},
                          {},    {},
                          false, {{0, 0}, 1}};
  out.w_constant = apr_constant(w, p, r, c.leb, fam);

  // normalize the witness in L^{s/q0}(w^q dx)
  BaseMeasure mu_wq = BaseMeasure::from_density(cw_pow(w.fn(), to_double(qv)));
  Exponent s_over_q0 = Exponent::from_value(sv * c.inv_q0);
  GridFunction h = cw_abs(h_in);
  double nh = lp_norm(h, s_over_q0, mu_wq);
  require(nh > 0.0 && std::isfinite(nh), "case 2 witness must be nontrivial with finite norm");
  h *= 1.0 / nh;
  out.h = h;

  Weight u(cw_pow(w.fn(), -to_double(c.pprime)));
  BaseMeasure mu_u = BaseMeasure::from_density(u.fn());
  out.B = maximal_norm_bound_M(Exponent::from_value(c.t), u, fam, mode);
  PositiveOperator m = [&](const GridFunction& fn) { return hl_maximal(fn, c.leb, fam); };
  Exponent t_exp = Exponent::from_value(c.t);
  NormFunctional vnorm = [&, mu_u, t_exp](const GridFunction& fn) {
    return lp_norm(fn, t_exp, mu_u);
  };

  GridFunction phi = cw_pow(h, to_double(a)) * cw_pow(w.fn(), to_double(b));
  RdFResult rdf = rdf_iterate(phi, m, out.B, K, vnorm);
  out.H = cw_pow(rdf.majorant, 1.0 / to_double(a)) * cw_pow(w.fn(), -to_double(b / a));

  GridFunction big =
      cw_pow(out.H, to_double(c.inv_q0)) * cw_pow(w.fn(), to_double(qv * c.inv_q0));
  out.W = Weight(big);
  out.W_constant = apr_constant(out.W, p0, r0, c.leb, fam);

  out.certs.push_back({"h <= H", dominates(out.H, h) ? 0.0 : 1.0, 0.0});
  out.certs.push_back({"||H||_{L^{s/q0}(w^q)} <~ 1", lp_norm(out.H, s_over_q0, mu_wq),
                       std::pow(2.0, to_double(c.t * q0v * c.inv_s))});
  const GridFunction& F = rdf.majorant;  // = H^{s/(p' q0 gamma)} w^{(p'+q)/(p' gamma)}
  check_identity(cw_pow(out.H, to_double(a)) * cw_pow(w.fn(), to_double(b)), F,
                 "H^{s/(p' q0 gamma)} w^{(p'+q)/(p' gamma)} = R_K(phi)");
  double a1 = a1_of(F, c.leb, fam);
  double slack = 1.0 + rdf.certs.tail_ratio;
  out.certs.push_back(
      {"[H^{s/(p' q0 gamma)} w^{(p'+q)/(p' gamma)}]_{A_1} <= 2||M|| (truncation slack)", a1,
       2.0 * out.B * slack});
  out.reports.emplace_back("rdf_norm_ratio", rdf.certs.norm_ratio);

  if (p0_one) {
    Rational r0v = Rational(1) / c.inv_r0;
    check_identity(cw_pow(big, to_double(r0v)), F, "W^{r0} = R_K(phi)");
    out.certs.push_back({"[W]_{A_{1,r0}} <= [F]_{A_1}^{1/r0}", out.W_constant.value,
                         std::pow(a1, to_double(c.inv_r0))});
  } else {
    Rational p0prime = Rational(1) / (Rational(1) - c.inv_p0);
    double pg_over_s = to_double(c.t * c.inv_s);
    double pp_over_p0p = to_double(c.pprime / p0prime);
    out.certs.push_back({"[W]_{A_{p0,r0}} <= [F]_{A_1}^{p' gamma/s} [w]_{A_{p,r}}^{p'/p0'}",
                         out.W_constant.value,
                         std::pow(a1, pg_over_s) * std::pow(out.w_constant.value, pp_over_p0p)});
    // variant of the bound with the w-factor measured in A_{inf,r}; smaller
    // by Jensen, reported but not asserted
    double ainf = apr_constant(w, Exponent::infinity(), r, c.leb, fam).value;
    out.reports.emplace_back("A_inf_r_variant_bound",
                             std::pow(a1, pg_over_s) * std::pow(ainf, pp_over_p0p));
  }
  return out;
}

OffdiagConstruction construct_case3(const Weight& w, long x0_cell, double tau0, const Exponent& p,
                                    const Exponent& r, const Exponent& p0, const Exponent& r0,
                                    const Exponent& q0, int K, const CubeFamily& fam,
                                    const BoundMode& mode) {
  CaseContext c = make_context(w, p, r, p0, r0, q0);
  c.inv_s = c.inv_p0 - c.inv_p;
  require(c.inv_s > 0, "case 3 regime needs 1/s = 1/p0 - 1/p > 0");
  require(c.inv_q0 == c.inv_s, "case 3 regime needs 1/q0 = 1/p0 - 1/p");
  require(c.inv_r0 - c.inv_r == c.inv_s, "case 3 regime needs 1/r0 - 1/r = 1/p0 - 1/p");
  require(c.inv_r > 0, "case 3 target needs r < inf");
  require(tau0 > 0.0, "case 3 needs a positive scale tau0");

  bool p0_one = (c.inv_p0 == 1);
  Rational q0v = Rational(1) / c.inv_q0;
  Rational a = Rational(1) / (c.pprime * c.gamma_val);  // 1/(p' gamma)
  if (p0_one) {
    require(c.pprime == q0v, "p0 = 1 forces p' = q0");
    require(c.gamma_val == c.inv_r0, "p0 = 1 forces gamma = 1/r0");
    require((Rational(1) / c.inv_r0) / q0v == a, "p0 = 1 forces r0/q0 = 1/(p' gamma)");
  }

  const Grid& grid = w.grid();
  OffdiagConstruction out{3,     GridFunction(grid),
                          GridFunction(grid),
                          Weight::constant(grid, 1.0),
                          1.0,   K,
                          {},    {},
                          {},    {},
                          false, {{0, 0}, 1}};
  out.w_constant = apr_constant(w, p, r, c.leb, fam);

  // the smallest discrete cube containing the requested ball
  int n = grid.cells_per_axis();
  int side = std::min<long>(n, std::max<long>(1, static_cast<long>(
                                                     std::ceil(2.0 * tau0 * n))));
  auto center = grid.cell_coords(x0_cell);
  DiscreteCube ball{{0, 0}, side};
  for (int axis = 0; axis < grid.dim; ++axis)
    ball.start[axis] = ((center[axis] - side / 2) % n + n) % n;
  out.ball = ball;
  GridFunction h(grid);
  double inv_vol = 1.0 / ball.volume(grid);
  for_each_cell(grid, ball, [&](long idx) { h[static_cast<std::size_t>(idx)] = inv_vol; });
  out.h = h;

  Weight u(cw_pow(w.fn(), -to_double(c.pprime)));
  BaseMeasure mu_u = BaseMeasure::from_density(u.fn());
  out.B = maximal_norm_bound_M(Exponent::from_value(c.t), u, fam, mode);
  PositiveOperator m = [&](const GridFunction& fn) { return hl_maximal(fn, c.leb, fam); };
  Exponent t_exp = Exponent::from_value(c.t);
  NormFunctional vnorm = [&, mu_u, t_exp](const GridFunction& fn) {
    return lp_norm(fn, t_exp, mu_u);
  };

  GridFunction phi = cw_pow(h, to_double(a)) * cw_pow(w.fn(), to_double(a * c.pprime));
  RdFResult rdf = rdf_iterate(phi, m, out.B, K, vnorm);
  out.H = cw_pow(rdf.majorant, to_double(c.t)) * cw_pow(w.fn(), -to_double(c.pprime));

  GridFunction big = cw_pow(out.H, to_double(c.inv_q0)) * w.fn();
  out.W = Weight(big);
  out.W_constant = apr_constant(out.W, p0, r0, c.leb, fam);

  out.certs.push_back({"h <= H", dominates(out.H, h) ? 0.0 : 1.0, 0.0});
  out.certs.push_back(
      {"||H||_{L^1} <~ 1", lp_norm(out.H, Exponent::from_value(1)), std::pow(2.0, to_double(c.t))});
  const GridFunction& F = rdf.majorant;  // = H^{1/(p' gamma)} w^{1/gamma}
  check_identity(cw_pow(out.H, to_double(a)) *
                     cw_pow(w.fn(), to_double(Rational(1) / c.gamma_val)),
                 F, "H^{1/(p' gamma)} w^{1/gamma} = R_K(phi)");
  double a1 = a1_of(F, c.leb, fam);
  double slack = 1.0 + rdf.certs.tail_ratio;
  out.certs.push_back(
      {"[H^{1/(p' gamma)} w^{1/gamma}]_{A_1} <= 2||M|| (truncation slack)", a1,
       2.0 * out.B * slack});
  out.reports.emplace_back("rdf_norm_ratio", rdf.certs.norm_ratio);
  out.reports.emplace_back("h_l1_norm", lp_norm(h, Exponent::from_value(1)));

  if (p0_one) {
    Rational r0v = Rational(1) / c.inv_r0;
    check_identity(cw_pow(big, to_double(r0v)), F, "W^{r0} = R_K(phi)");
    out.certs.push_back({"[W]_{A_{1,r0}} <= [F]_{A_1}^{1/r0}", out.W_constant.value,
                         std::pow(a1, to_double(c.inv_r0))});
  } else {
    Rational p0prime = Rational(1) / (Rational(1) - c.inv_p0);
    double pg_over_q0 = to_double(c.t * c.inv_q0);
    double pp_over_p0p = to_double(c.pprime / p0prime);
    out.certs.push_back({"[W]_{A_{p0,r0}} <= [F]_{A_1}^{p' gamma/q0} [w]_{A_{p,r}}^{p'/p0'}",
                         out.W_constant.value,
                         std::pow(a1, pg_over_q0) * std::pow(out.w_constant.value, pp_over_p0p)});
  }
  return out;
}

double case3_local_average(const OffdiagConstruction& c, const GridFunction& f, const Weight& w,
                           const Exponent& q0) {
  GridFunction fw = cw_abs(f) * w.fn();
  double q0v = q0.value();
  return std::pow(cell_average(cw_pow(fw, q0v), c.ball), 1.0 / q0v);
}

}  // namespace aprlab
