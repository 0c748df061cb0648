#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace aprlab {

// Discretization of the unit torus [0,1)^d into 2^{d*L} congruent cells.
// Cells are addressed row-major by axis coordinates in [0, 2^L).
struct Grid {
  int dim;    // 1 or 2
  int depth;  // L; finest cells have side 2^{-L}

  Grid(int d, int L) : dim(d), depth(L) {
    if (d < 1 || d > 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (L < 0 || d * L > 24) throw std::invalid_argument("grid depth out of range");
  }

  int cells_per_axis() const { return 1 << depth; }
  long cell_count() const { return 1L << (dim * depth); }
  double cell_volume() const { return 1.0 / static_cast<double>(cell_count()); }

  long cell_index(const std::array<int, 2>& c) const {
    int n = cells_per_axis();
    return dim == 1 ? c[0] : static_cast<long>(c[0]) * n + c[1];
  }
  std::array<int, 2> cell_coords(long idx) const {
    int n = cells_per_axis();
    if (dim == 1) return {static_cast<int>(idx), 0};
    return {static_cast<int>(idx / n), static_cast<int>(idx % n)};
  }
  // center of a cell, per axis, in [0,1)
  std::array<double, 2> cell_center(long idx) const {
    auto c = cell_coords(idx);
    double h = 1.0 / cells_per_axis();
    return {(c[0] + 0.5) * h, dim == 2 ? (c[1] + 0.5) * h : 0.0};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim == b.dim && a.depth == b.depth;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }
};

// Real-valued function, piecewise constant on the finest cells.
class GridFunction {
 public:
  explicit GridFunction(const Grid& g, double fill = 0.0)
      : grid_(g), v_(static_cast<std::size_t>(g.cell_count()), fill) {}
  GridFunction(const Grid& g, std::vector<double> values) : grid_(g), v_(std::move(values)) {
    if (v_.size() != static_cast<std::size_t>(g.cell_count()))
      throw std::invalid_argument("grid function value count does not match the grid");
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  // plain Lebesgue integral over the torus
  double integral() const;
  double max() const;
  double min() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(const GridFunction& o);
  GridFunction& operator*=(double c);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
  friend GridFunction operator*(double c, GridFunction a) { return a *= c; }
  friend GridFunction operator*(GridFunction a, double c) { return a *= c; }

 private:
  Grid grid_;
  std::vector<double> v_;
};

void check_same_grid(const Grid& a, const Grid& b);

GridFunction cw_abs(const GridFunction& f);
// |f|^e cellwise for general e; f^e preserving sign conventions is not needed,
// weights are strictly positive and test functions pass through cw_abs first.
GridFunction cw_pow(const GridFunction& f, double e);
GridFunction cw_inv(const GridFunction& f);
GridFunction cw_max(const GridFunction& f, const GridFunction& g);

// Function on a product torus grid1 x grid2, row-major (x1-cell major).
class ProductGridFunction {
 public:
  ProductGridFunction(const Grid& g1, const Grid& g2, double fill = 0.0)
      : g1_(g1), g2_(g2), v_(static_cast<std::size_t>(g1.cell_count() * g2.cell_count()), fill) {}
  ProductGridFunction(const Grid& g1, const Grid& g2, std::vector<double> values)
      : g1_(g1), g2_(g2), v_(std::move(values)) {
    if (v_.size() != static_cast<std::size_t>(g1_.cell_count() * g2_.cell_count()))
      throw std::invalid_argument("product grid function value count mismatch");
  }

  static ProductGridFunction tensor(const GridFunction& a, const GridFunction& b);

  const Grid& grid1() const { return g1_; }
  const Grid& grid2() const { return g2_; }
  long n1() const { return g1_.cell_count(); }
  long n2() const { return g2_.cell_count(); }
  double at(long i1, long i2) const { return v_[static_cast<std::size_t>(i1 * n2() + i2)]; }
  double& at(long i1, long i2) { return v_[static_cast<std::size_t>(i1 * n2() + i2)]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  GridFunction slice1(long i1) const;                    // f(x1, .) on grid2
  GridFunction slice2(long i2) const;                    // f(., x2) on grid1
  void set_slice1(long i1, const GridFunction& g);

  ProductGridFunction& operator+=(const ProductGridFunction& o);
  ProductGridFunction& operator*=(double c);
  friend ProductGridFunction operator+(ProductGridFunction a, const ProductGridFunction& b) {
    return a += b;
  }
  friend ProductGridFunction operator*(double c, ProductGridFunction a) { return a *= c; }

 private:
  Grid g1_, g2_;
  std::vector<double> v_;
};

ProductGridFunction cw_abs(const ProductGridFunction& f);

}  // namespace aprlab
