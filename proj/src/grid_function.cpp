#include "aprlab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace aprlab {

void check_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch between operands");
}

double GridFunction::integral() const {
  double s = 0.0;
  for (double x : v_) s += x;
  return s * grid_.cell_volume();
}

double GridFunction::max() const { return *std::max_element(v_.begin(), v_.end()); }
double GridFunction::min() const { return *std::min_element(v_.begin(), v_.end()); }

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}
GridFunction& GridFunction::operator-=(const GridFunction& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}
GridFunction& GridFunction::operator*=(const GridFunction& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] *= o.v_[i];
  return *this;
}
GridFunction& GridFunction::operator*=(double c) {
  for (double& x : v_) x *= c;
  return *this;
}

GridFunction cw_abs(const GridFunction& f) {
  GridFunction g = f;
  for (double& x : g.values()) x = std::fabs(x);
  return g;
}

GridFunction cw_pow(const GridFunction& f, double e) {
  GridFunction g = f;
  for (double& x : g.values()) x = std::pow(std::fabs(x), e);
  return g;
}

GridFunction cw_inv(const GridFunction& f) {
  GridFunction g = f;
  for (double& x : g.values()) x = 1.0 / x;
  return g;
}

GridFunction cw_max(const GridFunction& f, const GridFunction& g) {
  check_same_grid(f.grid(), g.grid());
  GridFunction h = f;
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::max(h[i], g[i]);
  return h;
}

ProductGridFunction ProductGridFunction::tensor(const GridFunction& a, const GridFunction& b) {
  ProductGridFunction f(a.grid(), b.grid());
  for (long i1 = 0; i1 < f.n1(); ++i1)
    for (long i2 = 0; i2 < f.n2(); ++i2)
      f.at(i1, i2) = a[static_cast<std::size_t>(i1)] * b[static_cast<std::size_t>(i2)];
  return f;
}

GridFunction ProductGridFunction::slice1(long i1) const {
  GridFunction g(g2_);
  for (long i2 = 0; i2 < n2(); ++i2) g[static_cast<std::size_t>(i2)] = at(i1, i2);
  return g;
}

GridFunction ProductGridFunction::slice2(long i2) const {
  GridFunction g(g1_);
  for (long i1 = 0; i1 < n1(); ++i1) g[static_cast<std::size_t>(i1)] = at(i1, i2);
  return g;
}

void ProductGridFunction::set_slice1(long i1, const GridFunction& g) {
  check_same_grid(g.grid(), g2_);
  for (long i2 = 0; i2 < n2(); ++i2) at(i1, i2) = g[static_cast<std::size_t>(i2)];
}

ProductGridFunction& ProductGridFunction::operator+=(const ProductGridFunction& o) {
  check_same_grid(g1_, o.g1_);
  check_same_grid(g2_, o.g2_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

ProductGridFunction& ProductGridFunction::operator*=(double c) {
  for (double& x : v_) x *= c;
  return *this;
}

ProductGridFunction cw_abs(const ProductGridFunction& f) {
  ProductGridFunction g = f;
  for (double& x : g.values()) x = std::fabs(x);
  return g;
}

}  // namespace aprlab
