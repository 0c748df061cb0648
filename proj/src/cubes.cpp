#include "aprlab/cubes.hpp"

#include "aprlab/dyadic.hpp"

#include <algorithm>
#include <cmath>

namespace aprlab {

CubeFamily CubeFamily::all_discrete(const Grid& g) {
  std::vector<DiscreteCube> cubes;
  int n = g.cells_per_axis();
  for (int side = 1; side < n; ++side) {
    if (g.dim == 1) {
      for (int s = 0; s < n; ++s) cubes.push_back({{s, 0}, side});
    } else {
      for (int s0 = 0; s0 < n; ++s0)
        for (int s1 = 0; s1 < n; ++s1) cubes.push_back({{s0, s1}, side});
    }
  }
  cubes.push_back({{0, 0}, n});  // the torus itself, once
  return CubeFamily(g, std::move(cubes), "all_discrete_cubes");
}

CubeFamily CubeFamily::dyadic(const DyadicGrid& d) {
  std::vector<DiscreteCube> cubes;
  d.for_each_cube([&](const Cube& c) { cubes.push_back(d.footprint(c)); });
  return CubeFamily(d.grid(), std::move(cubes), d.is_standard() ? "dyadic" : "dyadic_shifted");
}

CubeFamily CubeFamily::preferred(const Grid& g) {
  if (g.dim * g.depth <= 12) return all_discrete(g);
  return dyadic(DyadicGrid(g));
}

CellSums::CellSums(const Grid& g, const std::vector<double>& cell_values) : grid_(g) {
  n_ = g.cells_per_axis();
  if (g.dim == 1) {
    p_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
    for (int i = 0; i < n_; ++i) p_[static_cast<std::size_t>(i) + 1] = p_[static_cast<std::size_t>(i)] + cell_values[static_cast<std::size_t>(i)];
  } else {
    std::size_t w = static_cast<std::size_t>(n_) + 1;
    p_.assign(w * w, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        p_[(static_cast<std::size_t>(i) + 1) * w + (static_cast<std::size_t>(j) + 1)] =
            cell_values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] +
            p_[static_cast<std::size_t>(i) * w + (static_cast<std::size_t>(j) + 1)] +
            p_[(static_cast<std::size_t>(i) + 1) * w + static_cast<std::size_t>(j)] -
            p_[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)];
  }
}

double CellSums::rect(int r0, int r1, int c0, int c1) const {
  std::size_t w = static_cast<std::size_t>(n_) + 1;
  return p_[static_cast<std::size_t>(r1) * w + static_cast<std::size_t>(c1)] -
         p_[static_cast<std::size_t>(r0) * w + static_cast<std::size_t>(c1)] -
         p_[static_cast<std::size_t>(r1) * w + static_cast<std::size_t>(c0)] +
         p_[static_cast<std::size_t>(r0) * w + static_cast<std::size_t>(c0)];
}

double CellSums::sum(const DiscreteCube& q) const {
  if (grid_.dim == 1) {
    int a = q.start[0];
    int b = a + q.side;
    if (b <= n_) return p_[static_cast<std::size_t>(b)] - p_[static_cast<std::size_t>(a)];
    return (p_[static_cast<std::size_t>(n_)] - p_[static_cast<std::size_t>(a)]) +
           p_[static_cast<std::size_t>(b - n_)];
  }
  // split each axis into at most two unwrapped segments
  int seg0[2][2], seg1[2][2];
  int n0, n1;
  auto split = [&](int start, int side, int seg[2][2]) {
    int end = start + side;
    if (end <= n_) {
      seg[0][0] = start;
      seg[0][1] = end;
      return 1;
    }
    seg[0][0] = start;
    seg[0][1] = n_;
    seg[1][0] = 0;
    seg[1][1] = end - n_;
    return 2;
  };
  n0 = split(q.start[0], q.side, seg0);
  n1 = split(q.start[1], q.side, seg1);
  double s = 0.0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) s += rect(seg0[i][0], seg0[i][1], seg1[j][0], seg1[j][1]);
  return s;
}

BaseMeasure::BaseMeasure(const Grid& g, std::vector<double> masses)
    : grid_(g), masses_(std::move(masses)) {
  if (masses_.size() != static_cast<std::size_t>(g.cell_count()))
    throw std::invalid_argument("measure mass count does not match the grid");
  total_ = 0.0;
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::invalid_argument("measure masses must be strictly positive and finite");
    total_ += m;
  }
}

BaseMeasure BaseMeasure::lebesgue(const Grid& g) {
  return BaseMeasure(g, std::vector<double>(static_cast<std::size_t>(g.cell_count()),
                                            g.cell_volume()));
}

BaseMeasure BaseMeasure::from_density(const GridFunction& w) {
  std::vector<double> masses(w.size());
  double vol = w.grid().cell_volume();
  for (std::size_t i = 0; i < w.size(); ++i) masses[i] = w[i] * vol;
  return BaseMeasure(w.grid(), std::move(masses));
}

double BaseMeasure::measure(const DiscreteCube& q) const {
  double s = 0.0;
  for_each_cell(grid_, q, [&](long idx) { s += masses_[static_cast<std::size_t>(idx)]; });
  return s;
}

double BaseMeasure::doubling_constant() const {
  if (doubling_ >= 0.0) return doubling_;
  CellSums sums(grid_, masses_);
  int n = grid_.cells_per_axis();
  double worst = 1.0;
  for (int side = 1; side < n; ++side) {
    int dside = std::min(2 * side, n);
    int back = side / 2;
    auto ratio_at = [&](int s0, int s1) {
      DiscreteCube q{{s0, s1}, side};
      DiscreteCube qq{{(s0 - back % n + n) % n, (s1 - back % n + n) % n}, dside};
      double num = sums.sum(qq), den = sums.sum(q);
      return num / den;
    };
    if (grid_.dim == 1) {
      for (int s = 0; s < n; ++s) worst = std::max(worst, ratio_at(s, 0));
    } else {
      for (int s0 = 0; s0 < n; ++s0)
        for (int s1 = 0; s1 < n; ++s1) worst = std::max(worst, ratio_at(s0, s1));
    }
  }
  doubling_ = worst;
  return doubling_;
}

double cell_average(const GridFunction& f, const DiscreteCube& q, const BaseMeasure& mu) {
  check_same_grid(f.grid(), mu.grid());
  double num = 0.0, den = 0.0;
  for_each_cell(f.grid(), q, [&](long idx) {
    num += f[static_cast<std::size_t>(idx)] * mu.mass(idx);
    den += mu.mass(idx);
  });
  if (den <= 0.0) throw std::domain_error("cube has zero measure");
  return num / den;
}

double cell_average(const GridFunction& f, const DiscreteCube& q) {
  double s = 0.0;
  for_each_cell(f.grid(), q, [&](long idx) { s += f[static_cast<std::size_t>(idx)]; });
  return s / static_cast<double>(q.cell_count(f.grid()));
}

}  // namespace aprlab
