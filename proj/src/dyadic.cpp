#include "aprlab/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace aprlab {

DyadicGrid::DyadicGrid(const Grid& g, ShiftPattern omega) : grid_(g), omega_(std::move(omega)) {
  if (static_cast<int>(omega_.size()) != g.depth)
    throw std::invalid_argument("shift pattern must have one {0,1}^d entry per level");
  for (auto& w : omega_)
    for (int a = 0; a < 2; ++a) {
      if (a >= grid_.dim) w[a] = 0;
      if (w[a] > 1) throw std::invalid_argument("shift bits must be 0 or 1");
    }
  // S_l[a] = sum_{i=l+1..L} 2^{L-i} omega_i[a]
  offsets_.assign(static_cast<std::size_t>(g.depth) + 1, {0, 0});
  for (int level = g.depth - 1; level >= 0; --level)
    for (int a = 0; a < 2; ++a)
      offsets_[level][a] =
          offsets_[level + 1][a] + (1 << (g.depth - level - 1)) * omega_[level][a];
}

DyadicGrid DyadicGrid::random_shift(const Grid& g, Rng& rng) {
  ShiftPattern omega(static_cast<std::size_t>(g.depth), {0, 0});
  for (auto& w : omega)
    for (int a = 0; a < g.dim; ++a) w[a] = static_cast<std::uint8_t>(rng.uniform_int(0, 1));
  return DyadicGrid(g, std::move(omega));
}

bool DyadicGrid::is_standard() const {
  for (const auto& w : omega_)
    if (w[0] != 0 || w[1] != 0) return false;
  return true;
}

Cube DyadicGrid::cube_at(int level, long linear) const {
  int n = 1 << level;
  if (grid_.dim == 1) return Cube{level, {static_cast<int>(linear), 0}};
  return Cube{level, {static_cast<int>(linear / n), static_cast<int>(linear % n)}};
}

long DyadicGrid::linear_index(const Cube& c) const {
  int n = 1 << c.level;
  return grid_.dim == 1 ? c.coord[0] : static_cast<long>(c.coord[0]) * n + c.coord[1];
}

DiscreteCube DyadicGrid::footprint(const Cube& c) const {
  int side = cell_side(c);
  int n = grid_.cells_per_axis();
  DiscreteCube q{{0, 0}, side};
  for (int a = 0; a < grid_.dim; ++a)
    q.start[a] = (c.coord[a] * side + offsets_[c.level][a]) % n;
  return q;
}

Cube DyadicGrid::parent(const Cube& c) const {
  if (c.level == 0) throw std::invalid_argument("the top cube has no parent");
  int mask = (1 << c.level) - 1;
  Cube p{c.level - 1, {0, 0}};
  for (int a = 0; a < grid_.dim; ++a) {
    int shifted = (c.coord[a] - omega_[c.level - 1][a]) & mask;
    p.coord[a] = shifted >> 1;
  }
  return p;
}

Cube DyadicGrid::ancestor(const Cube& c, int k) const {
  if (k > c.level) throw std::invalid_argument("ancestor request passes the top of the lattice");
  Cube a = c;
  for (int i = 0; i < k; ++i) a = parent(a);
  return a;
}

Cube DyadicGrid::child(const Cube& c, int pos) const {
  if (c.level >= grid_.depth) throw std::invalid_argument("finest cubes have no children");
  int mask = (1 << (c.level + 1)) - 1;
  Cube ch{c.level + 1, {0, 0}};
  for (int a = 0; a < grid_.dim; ++a) {
    int bit = (pos >> a) & 1;
    ch.coord[a] = (2 * c.coord[a] + omega_[c.level][a] + bit) & mask;
  }
  return ch;
}

bool DyadicGrid::contains(const Cube& outer, const Cube& inner) const {
  if (inner.level < outer.level) return false;
  return ancestor(inner, inner.level - outer.level) == outer;
}

DiscreteCube shifted_cube(const Grid& g, const Cube& standard_cube, const ShiftPattern& omega) {
  return DyadicGrid(g, omega).footprint(standard_cube);
}

GridFunction haar(const DyadicGrid& d, const Cube& c, const std::array<int, 2>& eta) {
  const Grid& g = d.grid();
  for (int a = 0; a < g.dim; ++a)
    if (eta[a] != 0 && c.level >= g.depth)
      throw std::invalid_argument("cancellative Haar factor needs resolvable children");

  DiscreteCube q = d.footprint(c);
  int side = q.side;
  int half = side / 2;
  int n = g.cells_per_axis();
  // |I|^{-1/2} with |I| the Lebesgue measure of the cube
  double amp = std::pow(static_cast<double>(side) / n, -0.5 * g.dim);

  GridFunction h(g);
  if (g.dim == 1) {
    for (int i = 0; i < side; ++i) {
      double sign = (eta[0] == 0 || i < half) ? 1.0 : -1.0;
      h[static_cast<std::size_t>((q.start[0] + i) % n)] = sign * amp;
    }
    return h;
  }
  for (int i = 0; i < side; ++i) {
    double s0 = (eta[0] == 0 || i < half) ? 1.0 : -1.0;
    long row = static_cast<long>((q.start[0] + i) % n) * n;
    for (int j = 0; j < side; ++j) {
      double s1 = (eta[1] == 0 || j < half) ? 1.0 : -1.0;
      h[static_cast<std::size_t>(row + (q.start[1] + j) % n)] = s0 * s1 * amp;
    }
  }
  return h;
}

double inner(const GridFunction& f, const GridFunction& g) {
  check_same_grid(f.grid(), g.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().cell_volume();
}

double cube_average(const GridFunction& f, const DyadicGrid& d, const Cube& c) {
  double s = 0.0;
  d.for_each_cell(c, [&](long idx) { s += f[static_cast<std::size_t>(idx)]; });
  return s / static_cast<double>(d.footprint(c).cell_count(d.grid()));
}

GridFunction martingale_diff(const GridFunction& f, const DyadicGrid& d, const Cube& c) {
  check_same_grid(f.grid(), d.grid());
  if (c.level >= d.grid().depth)
    throw std::invalid_argument("martingale difference needs resolvable children");
  GridFunction out(d.grid());
  double avg = cube_average(f, d, c);
  for (int pos = 0; pos < d.n_children(); ++pos) {
    Cube ch = d.child(c, pos);
    double child_avg = cube_average(f, d, ch);
    d.for_each_cell(ch, [&](long idx) { out[static_cast<std::size_t>(idx)] = child_avg - avg; });
  }
  return out;
}

GridFunction block_diff(const GridFunction& f, const DyadicGrid& d, const Cube& c, int k) {
  if (c.level + k + 1 > d.grid().depth)
    throw std::invalid_argument("block difference exceeds the grid depth");
  GridFunction out(d.grid());
  // descendants k levels below c, found by walking the subtree
  std::vector<Cube> frontier{c};
  for (int step = 0; step < k; ++step) {
    std::vector<Cube> next;
    next.reserve(frontier.size() * static_cast<std::size_t>(d.n_children()));
    for (const Cube& q : frontier)
      for (int pos = 0; pos < d.n_children(); ++pos) next.push_back(d.child(q, pos));
    frontier = std::move(next);
  }
  for (const Cube& j : frontier) out += martingale_diff(f, d, j);
  return out;
}

GridFunction level_projection(const GridFunction& f, const DyadicGrid& d, int level) {
  if (level < 0 || level > d.grid().depth) throw std::invalid_argument("level out of range");
  GridFunction out(d.grid());
  for (long i = 0; i < d.cubes_at_level(level); ++i) {
    Cube c = d.cube_at(level, i);
    double avg = cube_average(f, d, c);
    d.for_each_cell(c, [&](long idx) { out[static_cast<std::size_t>(idx)] = avg; });
  }
  return out;
}

namespace {

GridFunction average_over(const Grid& g, const std::function<GridFunction(const DyadicGrid&)>& fn,
                          const std::vector<ShiftPattern>& shifts) {
  GridFunction acc(g);
  for (const ShiftPattern& omega : shifts) acc += fn(DyadicGrid(g, omega));
  acc *= 1.0 / static_cast<double>(shifts.size());
  return acc;
}

}  // namespace

GridFunction expect_shifts_exact(const Grid& g,
                                 const std::function<GridFunction(const DyadicGrid&)>& fn) {
  int bits = g.dim * g.depth;
  if (bits > 16)
    throw std::invalid_argument(
        "exact shift expectation over 2^" + std::to_string(bits) +
        " shifts is out of budget; use the monte_carlo mode");
  std::vector<ShiftPattern> shifts;
  long total = 1L << bits;
  shifts.reserve(static_cast<std::size_t>(total));
  for (long code = 0; code < total; ++code) {
    ShiftPattern omega(static_cast<std::size_t>(g.depth), {0, 0});
    long c = code;
    for (int level = 0; level < g.depth; ++level)
      for (int a = 0; a < g.dim; ++a) {
        omega[level][a] = static_cast<std::uint8_t>(c & 1);
        c >>= 1;
      }
    shifts.push_back(std::move(omega));
  }
  return average_over(g, fn, shifts);
}

GridFunction expect_shifts_mc(const Grid& g,
                              const std::function<GridFunction(const DyadicGrid&)>& fn, int samples,
                              std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("monte_carlo needs a positive sample count");
  std::vector<ShiftPattern> shifts;
  shifts.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    shifts.push_back(DyadicGrid::random_shift(g, rng).omega());
  }
  return average_over(g, fn, shifts);
}

}  // namespace aprlab
