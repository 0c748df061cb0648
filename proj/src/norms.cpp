#include "aprlab/norms.hpp"

#include <algorithm>
#include <cmath>

namespace aprlab {

double seq_norm(const std::vector<double>& xs, const Exponent& p) {
  if (p.is_infinity()) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::fabs(x));
    return m;
  }
  double pv = p.value();
  double s = 0.0;
  for (double x : xs) s += std::pow(std::fabs(x), pv);
  return std::pow(s, 1.0 / pv);
}

double lp_norm(const GridFunction& f, const NormSpec& spec) {
  if (spec.weight) check_same_grid(f.grid(), spec.weight->grid());
  if (spec.measure) check_same_grid(f.grid(), spec.measure->grid());
  auto weighted = [&](std::size_t i) {
    double x = std::fabs(f[i]);
    return spec.weight ? x * (*spec.weight)[i] : x;
  };
  if (spec.p.is_infinity()) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, weighted(i));
    return m;
  }
  double pv = spec.p.value();
  double vol = f.grid().cell_volume();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double mass = spec.measure ? spec.measure->mass(static_cast<long>(i)) : vol;
    s += std::pow(weighted(i), pv) * mass;
  }
  return std::pow(s, 1.0 / pv);
}

double lp_norm(const GridFunction& f, const Exponent& p) { return lp_norm(f, NormSpec{p}); }

double lp_norm(const GridFunction& f, const Exponent& p, const BaseMeasure& mu) {
  return lp_norm(f, NormSpec{p, nullptr, &mu});
}

double mixed_norm(const ProductGridFunction& f, const Exponent& p, const Exponent& q) {
  double vol2 = f.grid2().cell_volume();
  bool qinf = q.is_infinity();
  double qv = qinf ? 0.0 : q.value();

  auto inner_norm = [&](long i1) {
    if (qinf) {
      double m = 0.0;
      for (long i2 = 0; i2 < f.n2(); ++i2) m = std::max(m, std::fabs(f.at(i1, i2)));
      return m;
    }
    double s = 0.0;
    for (long i2 = 0; i2 < f.n2(); ++i2) s += std::pow(std::fabs(f.at(i1, i2)), qv) * vol2;
    return std::pow(s, 1.0 / qv);
  };

  if (p.is_infinity()) {
    double m = 0.0;
    for (long i1 = 0; i1 < f.n1(); ++i1) m = std::max(m, inner_norm(i1));
    return m;
  }
  double pv = p.value();
  double vol1 = f.grid1().cell_volume();
  double s = 0.0;
  for (long i1 = 0; i1 < f.n1(); ++i1) s += std::pow(inner_norm(i1), pv) * vol1;
  return std::pow(s, 1.0 / pv);
}

GridFunction slice_norms(const ProductGridFunction& f, const Exponent& q) {
  GridFunction out(f.grid1());
  for (long i1 = 0; i1 < f.n1(); ++i1)
    out[static_cast<std::size_t>(i1)] = lp_norm(f.slice1(i1), q);
  return out;
}

double vv_norm(const std::vector<GridFunction>& fj, const Exponent& q, const Exponent& s,
               const GridFunction* weight) {
  if (fj.empty()) return 0.0;
  const Grid& g = fj.front().grid();
  GridFunction stacked(g);
  bool sinf = s.is_infinity();
  double sv = sinf ? 0.0 : s.value();
  for (std::size_t i = 0; i < stacked.size(); ++i) {
    double acc = 0.0;
    for (const GridFunction& f : fj) {
      check_same_grid(f.grid(), g);
      double x = std::fabs(f[i]);
      if (weight) x *= (*weight)[i];
      acc = sinf ? std::max(acc, x) : acc + std::pow(x, sv);
    }
    stacked[i] = sinf ? acc : std::pow(acc, 1.0 / sv);
  }
  return lp_norm(stacked, q);
}

double nested_seq_norm(const std::vector<std::vector<double>>& a, const Exponent& p,
                       const Exponent& q) {
  std::vector<double> outer;
  outer.reserve(a.size());
  for (const auto& row : a) outer.push_back(seq_norm(row, q));
  return seq_norm(outer, p);
}

}  // namespace aprlab
