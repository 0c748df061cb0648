#include "aprlab/weights.hpp"

#include "aprlab/dyadic.hpp"
#include "aprlab/norms.hpp"
#include "aprlab/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aprlab {

Weight::Weight(GridFunction f) : f_(std::move(f)) {
  for (double x : f_.values())
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("weights must satisfy 0 < w < inf on every cell");
}

Weight Weight::constant(const Grid& g, double c) { return Weight(GridFunction(g, c)); }

Weight Weight::pow(double e) const { return Weight(cw_pow(f_, e)); }

namespace {

// mu-averages of v^e over cubes, via prefix sums
class PoweredAvg {
 public:
  PoweredAvg(const GridFunction& v, double e, const BaseMeasure& mu)
      : num_(make_num(v, e, mu)), den_(mu.grid(), mu.masses()) {}

  double operator()(const DiscreteCube& q) const { return num_.sum(q) / den_.sum(q); }

 private:
  static CellSums make_num(const GridFunction& v, double e, const BaseMeasure& mu) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      a[i] = std::pow(v[i], e) * mu.mass(static_cast<long>(i));
    return CellSums(v.grid(), a);
  }
  CellSums num_;
  CellSums den_;
};

double cube_max(const Grid& g, const GridFunction& v, const DiscreteCube& q) {
  double m = -std::numeric_limits<double>::infinity();
  for_each_cell(g, q, [&](long idx) { m = std::max(m, v[static_cast<std::size_t>(idx)]); });
  return m;
}

double cube_max_inv(const Grid& g, const GridFunction& v, const DiscreteCube& q) {
  double m = std::numeric_limits<double>::infinity();
  for_each_cell(g, q, [&](long idx) { m = std::min(m, v[static_cast<std::size_t>(idx)]); });
  return 1.0 / m;
}

template <typename PerCube>
ConstantCert sup_over(const CubeFamily& fam, const std::string& variant, PerCube&& per_cube) {
  ConstantCert cert;
  cert.cube_family = fam.label();
  cert.formula_variant = variant;
  cert.value = -std::numeric_limits<double>::infinity();
  for (const DiscreteCube& q : fam.cubes()) {
    double x = per_cube(q);
    if (x > cert.value) {
      cert.value = x;
      cert.argmax = q;
    }
  }
  return cert;
}

}  // namespace

ConstantCert ap_constant(const Weight& v, const Exponent& p, const BaseMeasure& mu,
                         const CubeFamily& fam) {
  check_same_grid(v.grid(), mu.grid());
  if (p.is_infinity() || p.reciprocal() > 1)
    throw std::invalid_argument("ap_constant requires 1 <= p < inf");
  const Grid& g = v.grid();
  PoweredAvg avg1(v.fn(), 1.0, mu);
  if (p.reciprocal() == 1) {  // p = 1
    return sup_over(fam, "a1", [&](const DiscreteCube& q) {
      return avg1(q) * cube_max_inv(g, v.fn(), q);
    });
  }
  Rational pv = p.value_exact();
  double exp2 = to_double(Rational(1) - pv / (pv - 1));  // 1 - p'
  double outer = to_double(pv - 1);
  PoweredAvg avg2(v.fn(), exp2, mu);
  return sup_over(fam, "ap", [&](const DiscreteCube& q) {
    return avg1(q) * std::pow(avg2(q), outer);
  });
}

ConstantCert apr_constant(const Weight& v, const Exponent& p, const Exponent& r,
                          const BaseMeasure& mu, const CubeFamily& fam, bool allow_trivial) {
  check_same_grid(v.grid(), mu.grid());
  if (p.reciprocal() > 1) throw std::invalid_argument("apr_constant requires 1 <= p <= inf");
  const Grid& g = v.grid();
  bool p_one = p.reciprocal() == 1;
  bool r_inf = r.is_infinity();
  if (p_one && r_inf) {
    if (!allow_trivial)
      throw std::domain_error(
          "A_{1,inf} is the trivial class: membership amounts to v ~ 1 a.e.");
    return sup_over(fam, "trivial_class", [&](const DiscreteCube& q) {
      return cube_max(g, v.fn(), q) * cube_max_inv(g, v.fn(), q);
    });
  }

  std::function<double(const DiscreteCube&)> a_factor, b_factor;
  PoweredAvg* ra = nullptr;
  PoweredAvg* pa = nullptr;
  PoweredAvg ra_store = r_inf ? PoweredAvg(v.fn(), 0.0, mu)
                              : PoweredAvg(v.fn(), r.value(), mu);
  if (r_inf) {
    a_factor = [&](const DiscreteCube& q) { return cube_max(g, v.fn(), q); };
  } else {
    ra = &ra_store;
    double inv_r = to_double(r.reciprocal());
    a_factor = [ra, inv_r](const DiscreteCube& q) { return std::pow((*ra)(q), inv_r); };
  }

  double dual_exp = 0.0, dual_outer = 0.0;
  if (p_one) {
    b_factor = [&](const DiscreteCube& q) { return cube_max_inv(g, v.fn(), q); };
  } else if (p.is_infinity()) {
    dual_exp = -1.0;
    dual_outer = 1.0;
  } else {
    Rational pprime = Rational(1) / (Rational(1) - p.reciprocal());
    dual_exp = -to_double(pprime);
    dual_outer = 1.0 / to_double(pprime);
  }
  PoweredAvg pa_store = p_one ? PoweredAvg(v.fn(), 0.0, mu)
                              : PoweredAvg(v.fn(), dual_exp, mu);
  if (!p_one) {
    pa = &pa_store;
    b_factor = [pa, dual_outer](const DiscreteCube& q) { return std::pow((*pa)(q), dual_outer); };
  }

  return sup_over(fam, "apr", [&](const DiscreteCube& q) { return a_factor(q) * b_factor(q); });
}

namespace {

// one multiplicative term of the multilinear product, with its esssup fallback
struct Term {
  bool esssup = false;     // use max of base over the cube
  const GridFunction* base = nullptr;
  double inner_exp = 0.0;  // average base^{inner_exp} ...
  double outer_exp = 0.0;  // ... raised to outer_exp
};

double eval_term(const Grid& g, const Term& t, const DiscreteCube& q, const PoweredAvg* avg) {
  if (t.esssup) return cube_max(g, *t.base, q);
  return std::pow((*avg)(q), t.outer_exp);
}

}  // namespace

ConstantCert multilinear_constant(const std::vector<Weight>& ws, const ExponentVector& p,
                                  const ExponentVector& r, const CubeFamily& fam) {
  if (ws.size() != p.size())
    throw std::invalid_argument("need one weight per entry of the p-vector");
  const std::size_t m = ws.size();
  const Grid& g = ws.front().grid();
  for (const Weight& w : ws) check_same_grid(w.grid(), g);
  DerivedScales ds = derived_scales(p, r);  // rejects unless r preceq_star p

  GridFunction wprod = ws.front().fn();
  for (std::size_t i = 1; i < m; ++i) wprod *= ws[i].fn();

  BaseMeasure leb = BaseMeasure::lebesgue(g);

  // delta form: exponents straight from the derived reciprocals
  std::vector<Term> delta_terms(m + 1);
  // literal case form: exponents recomputed from the displayed expressions
  std::vector<Term> case_terms(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    delta_terms[i].base = &ws[i].fn();
    case_terms[i].base = &ws[i].fn();
    if (ds.deltas[i].inv == 0) {
      // p_i = r_i: esssup of w_i^{-1}
      delta_terms[i].esssup = case_terms[i].esssup = true;
    } else {
      delta_terms[i].inner_exp = -ds.deltas[i].value();
      delta_terms[i].outer_exp = to_double(ds.deltas[i].inv);
      if (p[i].is_infinity()) {
        case_terms[i].inner_exp = -r[i].value();
        case_terms[i].outer_exp = to_double(r[i].reciprocal());
      } else {
        double rv = r[i].value(), pv = p[i].value();
        case_terms[i].inner_exp = rv * pv / (rv - pv);
        case_terms[i].outer_exp = 1.0 / rv - 1.0 / pv;
      }
    }
  }
  delta_terms[m].base = &wprod;
  case_terms[m].base = &wprod;
  if (ds.deltas[m].inv == 0) {
    delta_terms[m].esssup = case_terms[m].esssup = true;
  } else {
    delta_terms[m].inner_exp = ds.deltas[m].value();
    delta_terms[m].outer_exp = to_double(ds.deltas[m].inv);
    Rational inv_r3p = Rational(1) - r[m].reciprocal();  // 1/r_{m+1}'
    Rational inv_p = p.reciprocal_sum().reciprocal();
    if (inv_r3p == 0) {
      // r_{m+1} = 1, p < inf: average of w^p
      case_terms[m].inner_exp = to_double(Rational(1) / inv_p);
      case_terms[m].outer_exp = to_double(inv_p);
    } else {
      double r3p = to_double(Rational(1) / inv_r3p);
      double pv = to_double(Rational(1) / inv_p);
      case_terms[m].inner_exp = r3p * pv / (r3p - pv);
      case_terms[m].outer_exp = 1.0 / pv - 1.0 / r3p;
    }
  }

  auto build_avgs = [&](const std::vector<Term>& terms) {
    std::vector<PoweredAvg> avgs;
    avgs.reserve(terms.size());
    for (const Term& t : terms)
      avgs.emplace_back(t.base ? *t.base : wprod, t.esssup ? 0.0 : t.inner_exp, leb);
    return avgs;
  };
  // esssup of w_i^{-1} needs the inverted base for the max scan
  std::vector<GridFunction> inv_bases;
  inv_bases.reserve(m);
  for (std::size_t i = 0; i < m; ++i) inv_bases.push_back(cw_inv(ws[i].fn()));
  for (std::size_t i = 0; i < m; ++i)
    if (delta_terms[i].esssup) {
      delta_terms[i].base = &inv_bases[i];
      case_terms[i].base = &inv_bases[i];
    }

  std::vector<PoweredAvg> delta_avgs = build_avgs(delta_terms);
  std::vector<PoweredAvg> case_avgs = build_avgs(case_terms);

  double sup_case = -std::numeric_limits<double>::infinity();
  ConstantCert cert = sup_over(fam, "delta_form", [&](const DiscreteCube& q) {
    double dv = 1.0, cv = 1.0;
    for (std::size_t t = 0; t <= m; ++t) {
      dv *= eval_term(g, delta_terms[t], q, &delta_avgs[t]);
      cv *= eval_term(g, case_terms[t], q, &case_avgs[t]);
    }
    sup_case = std::max(sup_case, cv);
    return dv;
  });
  if (std::fabs(sup_case - cert.value) > 1e-9 * std::max(1.0, std::fabs(cert.value)))
    throw std::logic_error("delta-form and case-form multilinear constants disagree");
  return cert;
}

AInftyReport a_infty_report(const Weight& v, const BaseMeasure& mu, const CubeFamily& fam) {
  static const Rational probes[] = {Rational(1), Rational(5, 4), Rational(3, 2),
                                    Rational(2), Rational(4),    Rational(8)};
  AInftyReport rep{std::numeric_limits<double>::infinity(), Exponent::from_value(1)};
  for (const Rational& pr : probes) {
    Exponent p = Exponent::from_value(pr);
    double c = ap_constant(v, p, mu, fam).value;
    if (c < rep.constant) {
      rep.constant = c;
      rep.argmin_p = p;
    }
  }
  return rep;
}

namespace {

struct FactorizationScales {
  DerivedScales ds;
  LemmaScales ls;
  Rational total;   // (1-r)/r
  Rational r_m;     // value of r_m
  double rho_val;   // the scale rho itself
};

FactorizationScales factorization_scales(const ExponentVector& p, const ExponentVector& r) {
  FactorizationScales f{derived_scales(p, r), lemma_scales(p, r), Rational(0), Rational(0), 0.0};
  f.total = f.ds.r.reciprocal() - 1;
  f.r_m = r[p.size() - 1].value_exact();
  f.rho_val = to_double(Rational(1) / f.ls.rho.inv);
  return f;
}

Weight what_of(const std::vector<Weight>& first, double rho_val) {
  GridFunction prod = first.empty() ? GridFunction(Grid(1, 0), 1.0) : first.front().fn();
  for (std::size_t i = 1; i < first.size(); ++i) prod *= first[i].fn();
  return Weight(cw_pow(prod, rho_val));
}

}  // namespace

LemmaMainForward lemma_main_forward(const std::vector<Weight>& ws, const ExponentVector& p,
                                    const ExponentVector& r, const CubeFamily& fam) {
  const std::size_t m = ws.size();
  if (m != p.size() || m < 2)
    throw std::invalid_argument("factorization needs m >= 2 weights matching the p-vector");
  FactorizationScales fs = factorization_scales(p, r);
  const Grid& g = ws.front().grid();
  BaseMeasure leb = BaseMeasure::lebesgue(g);

  std::vector<Weight> first(ws.begin(), ws.end() - 1);
  Weight what = what_of(first, fs.rho_val);

  GridFunction wprod = ws.front().fn();
  for (std::size_t i = 1; i < m; ++i) wprod *= ws[i].fn();
  double rm = to_double(fs.r_m);
  GridFunction big1 = cw_pow(wprod, rm) * cw_pow(what.fn(), -rm * to_double(fs.ds.deltas[m].inv));
  GridFunction big2 =
      cw_pow(ws[m - 1].fn(), rm) * cw_pow(what.fn(), rm * to_double(fs.ds.deltas[m - 1].inv));
  for (std::size_t i = 0; i < big1.size(); ++i)
    if (std::fabs(big1[i] - big2[i]) > 1e-12 * std::max(1.0, std::fabs(big1[i])))
      throw std::logic_error("the two expressions for W disagree cellwise");

  LemmaMainForward out{what, Weight(big2), multilinear_constant(ws, p, r, fam), {}};

  for (std::size_t i = 0; i + 1 < m; ++i) {
    double theta = to_double(Rational(1) / fs.ls.thetas[i].inv);
    Exponent idx = Exponent::from_value(fs.total / fs.ls.thetas[i].inv);
    CertEntry e;
    e.name = "w_" + std::to_string(i + 1) + "^theta in A_{(1-r)/r * theta}";
    e.value = ap_constant(ws[i].pow(theta), idx, leb, fam).value;
    e.bound = std::pow(out.base.value, theta);
    out.certs.push_back(e);
  }
  {
    CertEntry e;
    e.name = "what in A_{(1-r)/r * rho}";
    e.value = ap_constant(what, Exponent::from_value(fs.total / fs.ls.rho.inv), leb, fam).value;
    e.bound = std::pow(out.base.value, fs.rho_val);
    out.certs.push_back(e);
  }
  {
    Exponent pslot = Exponent::from_reciprocal(fs.r_m * p[m - 1].reciprocal());
    Exponent rslot = Exponent::from_reciprocal(fs.r_m * fs.ds.deltas[m].inv);
    BaseMeasure mw = BaseMeasure::from_density(what.fn());
    CertEntry e;
    e.name = "W in A_{p_m/r_m, delta_{m+1}/r_m}(what)";
    e.value = apr_constant(out.big, pslot, rslot, mw, fam).value;
    e.bound = std::pow(out.base.value, rm);
    out.certs.push_back(e);
  }
  return out;
}

LemmaMainInverse lemma_main_inverse(const std::vector<Weight>& first, const Weight& big,
                                    const ExponentVector& p, const ExponentVector& r,
                                    const CubeFamily& fam) {
  const std::size_t m = p.size();
  if (first.size() + 1 != m)
    throw std::invalid_argument("inverse factorization takes the first m-1 weights");
  FactorizationScales fs = factorization_scales(p, r);
  const Grid& g = big.grid();
  BaseMeasure leb = BaseMeasure::lebesgue(g);

  Weight what = what_of(first, fs.rho_val);
  double rm = to_double(fs.r_m);
  Weight w_m(cw_pow(big.fn(), 1.0 / rm) * cw_pow(what.fn(), -to_double(fs.ds.deltas[m - 1].inv)));

  std::vector<Weight> all = first;
  all.push_back(w_m);

  LemmaMainInverse out{w_m, multilinear_constant(all, p, r, fam), {}};
  double bound = 1.0;
  {
    Exponent pslot = Exponent::from_reciprocal(fs.r_m * p[m - 1].reciprocal());
    Exponent rslot = Exponent::from_reciprocal(fs.r_m * fs.ds.deltas[m].inv);
    BaseMeasure mw = BaseMeasure::from_density(what.fn());
    bound *= std::pow(apr_constant(big, pslot, rslot, mw, fam).value, 1.0 / rm);
  }
  bound *= std::pow(
      ap_constant(what, Exponent::from_value(fs.total / fs.ls.rho.inv), leb, fam).value,
      to_double(fs.ls.rho.inv));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double theta = to_double(Rational(1) / fs.ls.thetas[i].inv);
    bound *= std::pow(
        ap_constant(first[i].pow(theta), Exponent::from_value(fs.total / fs.ls.thetas[i].inv),
                    leb, fam)
            .value,
        to_double(fs.ls.thetas[i].inv));
  }
  out.product_bound = CertEntry{"[w_vec] <= product of component constants",
                                out.vec_constant.value, bound};
  return out;
}

NormRewrite norm_rewrite_check(const GridFunction& f, const std::vector<Weight>& ws,
                               const ExponentVector& p, const ExponentVector& r) {
  const std::size_t m = ws.size();
  if (m != p.size() || m < 2) throw std::invalid_argument("norm rewrite needs m >= 2 weights");
  FactorizationScales fs = factorization_scales(p, r);
  std::vector<Weight> first(ws.begin(), ws.end() - 1);
  Weight what = what_of(first, fs.rho_val);
  double rm = to_double(fs.r_m);
  GridFunction wprod = ws.front().fn();
  for (std::size_t i = 1; i < m; ++i) wprod *= ws[i].fn();
  GridFunction big = cw_pow(ws[m - 1].fn(), rm) *
                     cw_pow(what.fn(), rm * to_double(fs.ds.deltas[m - 1].inv));
  BaseMeasure mw = BaseMeasure::from_density(what.fn());
  GridFunction fa = cw_abs(f);

  NormRewrite out{};
  {
    GridFunction fw = fa * wprod;
    out.lhs = lp_norm(fw, p.reciprocal_sum());
    double inv_r3p = to_double(Rational(1) - r[m].reciprocal());
    GridFunction core = cw_pow(fa * cw_pow(what.fn(), -inv_r3p), rm) * big;
    Exponent outer = Exponent::from_reciprocal(fs.r_m * p.reciprocal_sum().reciprocal());
    out.rhs = std::pow(lp_norm(core, outer, mw), 1.0 / rm);
  }
  {
    GridFunction fwm = fa * ws[m - 1].fn();
    out.lhs2 = lp_norm(fwm, p[m - 1]);
    GridFunction core = cw_pow(fa * cw_pow(what.fn(), -to_double(r[m - 1].reciprocal())), rm) * big;
    Exponent outer = Exponent::from_reciprocal(fs.r_m * p[m - 1].reciprocal());
    out.rhs2 = std::pow(lp_norm(core, outer, mw), 1.0 / rm);
  }
  return out;
}

MixedClassConstants mixed_class_constants(const ProductGridFunction& w1,
                                          const ProductGridFunction& w2, const ExponentVector& p,
                                          const CubeFamily& fam1, const CubeFamily& fam2) {
  if (p.size() != 2) throw std::invalid_argument("mixed classes are bilinear: need p = (p1, p2)");
  for (std::size_t i = 0; i < 2; ++i)
    if (p[i].is_infinity() || p[i].reciprocal() == 1)
      throw std::invalid_argument("mixed classes need 1 < p_i < inf");
  check_same_grid(w1.grid1(), w2.grid1());
  check_same_grid(w1.grid2(), w2.grid2());

  ExponentVector rvec = r_vector({Exponent::from_value(1), Exponent::from_value(1),
                                  Exponent::from_value(1)});
  MixedClassConstants out{0.0, 0.0, 0.0};
  for (long i2 = 0; i2 < w1.n2(); ++i2) {
    std::vector<Weight> pair{Weight(w1.slice2(i2)), Weight(w2.slice2(i2))};
    out.bilinear_slice_max =
        std::max(out.bilinear_slice_max, multilinear_constant(pair, p, rvec, fam1).value);
  }
  BaseMeasure leb2 = BaseMeasure::lebesgue(w1.grid2());
  for (long i1 = 0; i1 < w1.n1(); ++i1) {
    out.a1_slice_max = std::max(
        out.a1_slice_max,
        ap_constant(Weight(w1.slice1(i1)).pow(p[0].value()), p[0], leb2, fam2).value);
    out.a2_slice_max = std::max(
        out.a2_slice_max,
        ap_constant(Weight(w2.slice1(i1)).pow(p[1].value()), p[1], leb2, fam2).value);
  }
  return out;
}

Weight power_weight(const Grid& g, double a) {
  GridFunction f(g);
  for (long i = 0; i < g.cell_count(); ++i) {
    auto c = g.cell_center(i);
    double d2 = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      double d = std::fabs(c[static_cast<std::size_t>(axis)] - 0.5);
      d = std::min(d, 1.0 - d);
      d2 += d * d;
    }
    f[static_cast<std::size_t>(i)] = std::pow(std::sqrt(d2), a);
  }
  return Weight(std::move(f));
}

Weight random_a1_weight(const Grid& g, double delta, std::uint64_t seed, const CubeFamily& fam) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("random_a1 needs delta in (0,1)");
  Rng rng(seed);
  GridFunction density(g, 0.05);
  int spikes = rng.uniform_int(1, 3);
  for (int s = 0; s < spikes; ++s) {
    long cell = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(g.cell_count()));
    density[static_cast<std::size_t>(cell)] += rng.uniform(0.5, 2.0);
  }
  BaseMeasure leb = BaseMeasure::lebesgue(g);
  GridFunction m = hl_maximal(density, leb, fam);
  return Weight(cw_pow(m, delta));
}

ProductGridFunction tensor_weight(const Weight& u, const Weight& v) {
  return ProductGridFunction::tensor(u.fn(), v.fn());
}

}  // namespace aprlab
