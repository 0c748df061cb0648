#pragma once

#include "aprlab/cubes.hpp"
#include "aprlab/exponents.hpp"
#include "aprlab/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace aprlab {

// Strictly positive, finite grid function.
class Weight {
 public:
  explicit Weight(GridFunction f);
  static Weight constant(const Grid& g, double c);

  const GridFunction& fn() const { return f_; }
  const Grid& grid() const { return f_.grid(); }
  std::size_t size() const { return f_.size(); }
  double operator[](std::size_t i) const { return f_[i]; }

  Weight pow(double e) const;
  friend Weight operator*(const Weight& a, const Weight& b) { return Weight(a.f_ * b.f_); }

 private:
  GridFunction f_;
};

// A computed weight-class constant together with where and how it was attained.
struct ConstantCert {
  double value = 1.0;
  DiscreteCube argmax{{0, 0}, 1};
  std::string cube_family;
  std::string formula_variant;
};

// One certified inequality: value <= bound up to a relative tolerance.
struct CertEntry {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool holds(double rel_tol = 1e-9) const { return value <= bound * (1.0 + rel_tol) + 1e-300; }
};

// [v]_{A_p(mu)} over the family; p = 1 uses the esssup form.  Requires
// 1 <= p < inf.
ConstantCert ap_constant(const Weight& v, const Exponent& p, const BaseMeasure& mu,
                         const CubeFamily& fam);

// [v]_{A_{p,r}(mu)} with the endpoint replacements: r = inf -> esssup_Q v,
// p = 1 -> esssup_Q v^{-1}, p = inf -> the second factor becomes the plain
// mu-average of v^{-1}.  The pair p = 1, r = inf is the trivial class and is
// rejected unless allow_trivial, in which case (max v)(max v^{-1}) is
// returned.
ConstantCert apr_constant(const Weight& v, const Exponent& p, const Exponent& r,
                          const BaseMeasure& mu, const CubeFamily& fam,
                          bool allow_trivial = false);

// Multilinear constant [w_vec]_{A_{p_vec, r_vec}} (Lebesgue).  Evaluates both
// the delta-exponent form and the literal case-by-case form and asserts they
// agree; zero 1/delta slots fall back to the esssup replacements.
ConstantCert multilinear_constant(const std::vector<Weight>& ws, const ExponentVector& p,
                                  const ExponentVector& r, const CubeFamily& fam);

// A_infty is the union of the A_p classes; report the best constant over a
// fixed probe grid of p values together with the attaining p.
struct AInftyReport {
  double constant;
  Exponent argmin_p;
};
AInftyReport a_infty_report(const Weight& v, const BaseMeasure& mu, const CubeFamily& fam);

// Factorization of the multilinear class through one-weight classes.
struct LemmaMainForward {
  Weight what;  // w-hat = (prod_{i<m} w_i)^rho
  Weight big;   // W = w^{r_m} what^{-r_m/delta_{m+1}} = w_m^{r_m} what^{r_m/delta_m}
  ConstantCert base;             // [w_vec]_{A_{p,r}}
  std::vector<CertEntry> certs;  // component memberships vs powers of base
};
LemmaMainForward lemma_main_forward(const std::vector<Weight>& ws, const ExponentVector& p,
                                    const ExponentVector& r, const CubeFamily& fam);

struct LemmaMainInverse {
  Weight w_m;
  ConstantCert vec_constant;  // [w_vec] of the reassembled tuple
  CertEntry product_bound;    // vs the product of component constants
};
LemmaMainInverse lemma_main_inverse(const std::vector<Weight>& first, const Weight& big,
                                    const ExponentVector& p, const ExponentVector& r,
                                    const CubeFamily& fam);

// Both sides of the norm rewrites transporting ||f w||_{L^p} and
// ||f w_m||_{L^{p_m}} into W-weighted norms over d(w-hat).
struct NormRewrite {
  double lhs, rhs;    // ||fw||_{L^p} vs the W-form
  double lhs2, rhs2;  // ||f w_m||_{L^{p_m}} vs the W-form
};
NormRewrite norm_rewrite_check(const GridFunction& f, const std::vector<Weight>& ws,
                               const ExponentVector& p, const ExponentVector& r);

// Slice characteristics of a bi-parameter weight pair.
struct MixedClassConstants {
  double bilinear_slice_max;  // esssup_{x2} [(w1(.,x2), w2(.,x2))]_{A_p(grid1)}
  double a1_slice_max;        // esssup_{x1} [w1(x1,.)^{p1}]_{A_{p1}(grid2)}
  double a2_slice_max;        // esssup_{x1} [w2(x1,.)^{p2}]_{A_{p2}(grid2)}
};
MixedClassConstants mixed_class_constants(const ProductGridFunction& w1,
                                          const ProductGridFunction& w2, const ExponentVector& p,
                                          const CubeFamily& fam1, const CubeFamily& fam2);

// Generators.  power: distance-to-center^a at cell centers (torus metric);
// random_a1: (M mu_rand)^delta over the family, delta in (0,1);
// tensor: u(x1) v(x2) on the product grid.
Weight power_weight(const Grid& g, double a);
Weight random_a1_weight(const Grid& g, double delta, std::uint64_t seed, const CubeFamily& fam);
ProductGridFunction tensor_weight(const Weight& u, const Weight& v);

}  // namespace aprlab
