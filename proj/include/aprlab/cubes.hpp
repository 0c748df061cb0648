#pragma once

#include "aprlab/grid.hpp"

#include <string>
#include <vector>

namespace aprlab {

// Axis-aligned cube with finest-cell-aligned corners, in cell units,
// wrapping periodically.  side is the same along every axis.
struct DiscreteCube {
  std::array<int, 2> start;  // per-axis start cell, in [0, 2^L)
  int side;                  // number of cells per axis, in [1, 2^L]

  long cell_count(const Grid& g) const {
    long s = side;
    return g.dim == 1 ? s : s * s;
  }
  double volume(const Grid& g) const {
    return static_cast<double>(cell_count(g)) * g.cell_volume();
  }
  friend bool operator==(const DiscreteCube& a, const DiscreteCube& b) {
    return a.start == b.start && a.side == b.side;
  }
};

// Visits the global cell indices of a periodic cube.
template <typename Fn>
void for_each_cell(const Grid& g, const DiscreteCube& q, Fn&& fn) {
  int n = g.cells_per_axis();
  if (g.dim == 1) {
    for (int i = 0; i < q.side; ++i) fn(static_cast<long>((q.start[0] + i) % n));
    return;
  }
  for (int i = 0; i < q.side; ++i) {
    long row = static_cast<long>((q.start[0] + i) % n) * n;
    for (int j = 0; j < q.side; ++j) fn(row + (q.start[1] + j) % n);
  }
}

class DyadicGrid;  // dyadic.hpp

// The cube family a supremum runs over.  all_discrete_cubes enumerates every
// periodic axis-aligned cube; dyadic restricts to a dyadic lattice.
class CubeFamily {
 public:
  static CubeFamily all_discrete(const Grid& g);
  static CubeFamily dyadic(const DyadicGrid& d);
  // all_discrete when the grid has at most 2^12 cells, dyadic (standard
  // lattice) otherwise
  static CubeFamily preferred(const Grid& g);

  const Grid& grid() const { return grid_; }
  const std::vector<DiscreteCube>& cubes() const { return cubes_; }
  const std::string& label() const { return label_; }

 private:
  CubeFamily(const Grid& g, std::vector<DiscreteCube> cubes, std::string label)
      : grid_(g), cubes_(std::move(cubes)), label_(std::move(label)) {}
  Grid grid_;
  std::vector<DiscreteCube> cubes_;
  std::string label_;
};

// Prefix sums over cells with periodic wrap; O(1) cube sums.
class CellSums {
 public:
  CellSums(const Grid& g, const std::vector<double>& cell_values);
  double sum(const DiscreteCube& q) const;

 private:
  double rect(int r0, int r1, int c0, int c1) const;  // half-open, unwrapped
  Grid grid_;
  int n_;
  std::vector<double> p_;  // (n+1) or (n+1)^2 prefix table
};

// Positive cell-mass vector; the doubling constant max_Q mu(2Q)/mu(Q) over
// all discrete cubes (2Q has doubled side, start shifted back by side/2,
// capped at the full torus) is computed on demand.
class BaseMeasure {
 public:
  BaseMeasure(const Grid& g, std::vector<double> masses);
  static BaseMeasure lebesgue(const Grid& g);
  // mu = w dx for a positive cell function w
  static BaseMeasure from_density(const GridFunction& w);

  const Grid& grid() const { return grid_; }
  double mass(long cell) const { return masses_[static_cast<std::size_t>(cell)]; }
  const std::vector<double>& masses() const { return masses_; }
  double total() const { return total_; }
  double measure(const DiscreteCube& q) const;
  double doubling_constant() const;

 private:
  Grid grid_;
  std::vector<double> masses_;
  double total_;
  mutable double doubling_ = -1.0;
};

// mu-average of f over a cube.  Throws when mu(Q) = 0 (cannot happen for a
// BaseMeasure, which enforces strictly positive masses).
double cell_average(const GridFunction& f, const DiscreteCube& q, const BaseMeasure& mu);
// plain Lebesgue average
double cell_average(const GridFunction& f, const DiscreteCube& q);

}  // namespace aprlab
