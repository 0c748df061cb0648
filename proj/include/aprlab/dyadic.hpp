#pragma once

#include "aprlab/cubes.hpp"
#include "aprlab/grid.hpp"
#include "aprlab/random.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace aprlab {

// Cube of a dyadic lattice, addressed by (level, per-axis coordinate mod 2^level).
struct Cube {
  int level;
  std::array<int, 2> coord;

  friend bool operator==(const Cube& a, const Cube& b) {
    return a.level == b.level && a.coord == b.coord;
  }
};

// One shift coordinate omega_i in {0,1}^d per level i = 1..L.  Shifts finer
// than the grid resolution act trivially and are truncated away.
using ShiftPattern = std::vector<std::array<std::uint8_t, 2>>;

// Periodic dyadic lattice D_omega on the discretized torus.  Level-l cubes
// are the standard level-l cubes translated by sum_{i>l} 2^{-i} omega_i.
class DyadicGrid {
 public:
  explicit DyadicGrid(const Grid& g) : DyadicGrid(g, ShiftPattern(g.depth, {0, 0})) {}
  DyadicGrid(const Grid& g, ShiftPattern omega);

  static DyadicGrid random_shift(const Grid& g, Rng& rng);

  const Grid& grid() const { return grid_; }
  const ShiftPattern& omega() const { return omega_; }
  bool is_standard() const;

  int levels() const { return grid_.depth + 1; }  // levels 0..L
  long cubes_at_level(int level) const { return 1L << (grid_.dim * level); }
  Cube cube_at(int level, long linear) const;
  long linear_index(const Cube& c) const;

  int cell_side(const Cube& c) const { return 1 << (grid_.depth - c.level); }
  double volume(const Cube& c) const { return 1.0 / static_cast<double>(cubes_at_level(c.level)); }

  // geometric footprint in cell units (periodic)
  DiscreteCube footprint(const Cube& c) const;

  Cube parent(const Cube& c) const;
  Cube ancestor(const Cube& c, int k) const;
  // child position pos in [0, 2^d): bit a of pos selects the right half
  // along axis a (relative to the cube's own, possibly wrapped, footprint)
  Cube child(const Cube& c, int pos) const;
  int n_children() const { return 1 << grid_.dim; }
  bool contains(const Cube& outer, const Cube& inner) const;

  template <typename Fn>
  void for_each_cell(const Cube& c, Fn&& fn) const {
    aprlab::for_each_cell(grid_, footprint(c), fn);
  }

  template <typename Fn>
  void for_each_cube(Fn&& fn) const {
    for (int level = 0; level <= grid_.depth; ++level)
      for (long i = 0; i < cubes_at_level(level); ++i) fn(cube_at(level, i));
  }

 private:
  // per-axis shift of level-l cubes in finest-cell units
  int level_offset(int level, int axis) const { return offsets_[level][axis]; }

  Grid grid_;
  ShiftPattern omega_;
  std::vector<std::array<int, 2>> offsets_;  // precomputed S_l per level
};

// The shifted image of a standard-lattice cube under omega (the lattice map
// I -> I + omega); returns the footprint of the translated cube.
DiscreteCube shifted_cube(const Grid& g, const Cube& standard_cube, const ShiftPattern& omega);

// L^2-normalized Haar function h_I^eta; eta per axis, 0 = averaging factor,
// 1 = cancellative factor.  Cancellative axes need level < depth.
GridFunction haar(const DyadicGrid& d, const Cube& c, const std::array<int, 2>& eta);

// inner product <f, g> in L^2 of the torus
double inner(const GridFunction& f, const GridFunction& g);
// <f>_I (Lebesgue)
double cube_average(const GridFunction& f, const DyadicGrid& d, const Cube& c);

// Delta_I f = sum_children <f>_child 1_child - <f>_I 1_I
GridFunction martingale_diff(const GridFunction& f, const DyadicGrid& d, const Cube& c);
// Delta_{I,k} f = sum_{J: J^{(k)} = I} Delta_J f
GridFunction block_diff(const GridFunction& f, const DyadicGrid& d, const Cube& c, int k);

// conditional expectation at a level: piecewise constant cube averages
GridFunction level_projection(const GridFunction& f, const DyadicGrid& d, int level);

// Average over the full shift space (2^{dL} shifts, capped at 2^16) or a
// seeded Monte Carlo sample of it.
GridFunction expect_shifts_exact(const Grid& g,
                                 const std::function<GridFunction(const DyadicGrid&)>& fn);
GridFunction expect_shifts_mc(const Grid& g,
                              const std::function<GridFunction(const DyadicGrid&)>& fn, int samples,
                              std::uint64_t seed);

}  // namespace aprlab
