#pragma once

#include "aprlab/cubes.hpp"
#include "aprlab/exponents.hpp"
#include "aprlab/grid.hpp"

#include <vector>

namespace aprlab {

// ell^p norm of a finite sequence; p = inf is the max of |x_i|, p < 1 the
// usual quasi-norm expression.
double seq_norm(const std::vector<double>& xs, const Exponent& p);

// Weighted Lebesgue norm spec.  The weight enters multiplicatively
// (||f w||_{L^p(mu)}); the measure defaults to Lebesgue.  Pointers are
// non-owning views valid for the duration of the call.
struct NormSpec {
  Exponent p;
  const GridFunction* weight = nullptr;
  const BaseMeasure* measure = nullptr;
};

double lp_norm(const GridFunction& f, const NormSpec& spec);
double lp_norm(const GridFunction& f, const Exponent& p);
double lp_norm(const GridFunction& f, const Exponent& p, const BaseMeasure& mu);

// || ||f(x1,.)||_{L^q} ||_{L^p} on a product grid, computed directly.
double mixed_norm(const ProductGridFunction& f, const Exponent& p, const Exponent& q);

// x1 -> ||f(x1,.)||_{L^q}, as a function on the first grid.
GridFunction slice_norms(const ProductGridFunction& f, const Exponent& q);

// || (sum_j |f_j v|^s)^{1/s} ||_{L^q}; s = inf takes the cellwise sup over j.
double vv_norm(const std::vector<GridFunction>& fj, const Exponent& q, const Exponent& s,
               const GridFunction* weight = nullptr);

// || { || {a_{j,i}}_i ||_{ell^q} }_j ||_{ell^p}  (inner index i, outer j)
double nested_seq_norm(const std::vector<std::vector<double>>& a, const Exponent& p,
                       const Exponent& q);

}  // namespace aprlab
