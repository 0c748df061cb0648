#include "aprlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace aprlab {

GridFunction hl_maximal(const GridFunction& f, const BaseMeasure& mu, const CubeFamily& fam) {
  check_same_grid(f.grid(), mu.grid());
  const Grid& g = f.grid();
  std::vector<double> num(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) num[i] = std::fabs(f[i]) * mu.mass(static_cast<long>(i));
  CellSums nsums(g, num);
  CellSums msums(g, mu.masses());
  GridFunction out(g);
  for (const DiscreteCube& q : fam.cubes()) {
    double avg = nsums.sum(q) / msums.sum(q);
    for_each_cell(g, q, [&](long idx) {
      double& o = out[static_cast<std::size_t>(idx)];
      o = std::max(o, avg);
    });
  }
  return out;
}

GridFunction weighted_dyadic_maximal(const GridFunction& f, const Weight& w, const DyadicGrid& d) {
  return hl_maximal(f, BaseMeasure::from_density(w.fn()), CubeFamily::dyadic(d));
}

GridFunction bilinear_maximal(const GridFunction& f1, const GridFunction& f2,
                              const CubeFamily& fam) {
  check_same_grid(f1.grid(), f2.grid());
  const Grid& g = f1.grid();
  std::vector<double> a1(f1.size()), a2(f2.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    a1[i] = std::fabs(f1[i]);
    a2[i] = std::fabs(f2[i]);
  }
  CellSums s1(g, a1), s2(g, a2);
  GridFunction out(g);
  for (const DiscreteCube& q : fam.cubes()) {
    double cells = static_cast<double>(q.cell_count(g));
    double prod = (s1.sum(q) / cells) * (s2.sum(q) / cells);
    for_each_cell(g, q, [&](long idx) {
      double& o = out[static_cast<std::size_t>(idx)];
      o = std::max(o, prod);
    });
  }
  return out;
}

// --- shifts ------------------------------------------------------------------

double ShiftSpec::size_bound(const DyadicGrid& grid, const Entry& e) {
  int d = grid.grid().dim;
  auto vol = [&](const Cube& c) { return std::pow(0.5, d * c.level); };
  return std::sqrt(vol(e.I1) * vol(e.I2) * vol(e.I3)) / (vol(e.K) * vol(e.K));
}

ShiftSpec::ShiftSpec(DyadicGrid grid, std::array<int, 3> complexity, ShiftForm form,
                     std::vector<Entry> coeffs)
    : grid_(std::move(grid)), complexity_(complexity), form_(form), coeffs_(std::move(coeffs)) {
  int depth = grid_.grid().depth;
  for (int k : complexity_)
    if (k < 0) throw std::invalid_argument("shift complexity must be nonnegative");
  for (const Entry& e : coeffs_) {
    const Cube* cubes[3] = {&e.I1, &e.I2, &e.I3};
    for (int slot = 0; slot < 3; ++slot) {
      const Cube& I = *cubes[slot];
      if (I.level != e.K.level + complexity_[static_cast<std::size_t>(slot)] ||
          !grid_.contains(e.K, I))
        throw std::invalid_argument("shift coefficient key violates I_i^{(k_i)} = K");
      bool cancellative = (static_cast<int>(form_) != slot + 1);
      if (cancellative && I.level >= depth)
        throw std::invalid_argument("cancellative shift slot exceeds the grid depth");
      if (I.level > depth) throw std::invalid_argument("shift key exceeds the grid depth");
    }
    if (std::fabs(e.a) > size_bound(grid_, e) * (1.0 + 1e-12))
      throw std::invalid_argument("shift coefficient violates the size normalization");
  }
}

ShiftSpec ShiftSpec::random(const DyadicGrid& grid, std::array<int, 3> complexity, ShiftForm form,
                            double fill, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude > 1.0)
    throw std::invalid_argument("amplitude is a fraction of the maximal size");
  Rng rng(seed);
  int depth = grid.grid().depth;
  int maxk = std::max({complexity[0], complexity[1], complexity[2]});
  std::vector<Entry> entries;
  for (int level = 0; level + maxk <= depth; ++level) {
    // cancellative slots need one more level of headroom
    bool ok = true;
    for (int slot = 0; slot < 3; ++slot) {
      bool cancellative = (static_cast<int>(form) != slot + 1);
      if (cancellative && level + complexity[static_cast<std::size_t>(slot)] >= depth) ok = false;
    }
    if (!ok) continue;
    for (long ki = 0; ki < grid.cubes_at_level(level); ++ki) {
      Cube K = grid.cube_at(level, ki);
      auto descendants = [&](int k) {
        std::vector<Cube> out{K};
        for (int step = 0; step < k; ++step) {
          std::vector<Cube> next;
          for (const Cube& c : out)
            for (int pos = 0; pos < grid.n_children(); ++pos) next.push_back(grid.child(c, pos));
          out = std::move(next);
        }
        return out;
      };
      for (const Cube& i1 : descendants(complexity[0]))
        for (const Cube& i2 : descendants(complexity[1]))
          for (const Cube& i3 : descendants(complexity[2])) {
            if (rng.uniform() > fill) continue;
            Entry e{K, i1, i2, i3, 0.0};
            e.a = (rng.coin() ? 1.0 : -1.0) * amplitude * size_bound(grid, e);
            entries.push_back(e);
          }
    }
  }
  return ShiftSpec(grid, complexity, form, std::move(entries));
}

namespace {

constexpr std::array<int, 2> kCancel = {1, 1};
constexpr std::array<int, 2> kAvg = {0, 0};

GridFunction slot_haar(const DyadicGrid& d, const Cube& c, bool cancellative) {
  return haar(d, c, cancellative ? kCancel : kAvg);
}

}  // namespace

GridFunction shift_apply(const ShiftSpec& spec, const GridFunction& f1, const GridFunction& f2) {
  const DyadicGrid& d = spec.grid();
  check_same_grid(f1.grid(), d.grid());
  check_same_grid(f2.grid(), d.grid());
  int noncancel = static_cast<int>(spec.form());
  GridFunction out(d.grid());
  for (const ShiftSpec::Entry& e : spec.coeffs()) {
    GridFunction h1 = slot_haar(d, e.I1, noncancel != 1);
    GridFunction h2 = slot_haar(d, e.I2, noncancel != 2);
    double c = e.a * inner(f1, h1) * inner(f2, h2);
    if (c == 0.0) continue;
    GridFunction h3 = slot_haar(d, e.I3, noncancel != 3);
    out += c * h3;
  }
  return out;
}

// --- paraproducts ------------------------------------------------------------

ParaproductSpec::ParaproductSpec(DyadicGrid grid, int form, std::vector<Entry> coeffs)
    : grid_(std::move(grid)), form_(form), coeffs_(std::move(coeffs)) {
  if (form_ < 1 || form_ > 3) throw std::invalid_argument("paraproduct form must be 1, 2 or 3");
  int depth = grid_.grid().depth;
  for (const Entry& e : coeffs_)
    if (e.K.level >= depth)
      throw std::invalid_argument("paraproduct keys need resolvable children");
  // Carleson: accumulate a_K^2 onto every ancestor and compare with |K0|
  for (const Entry& e0 : coeffs_) {
    double budget = 0.0;
    for (const Entry& e : coeffs_)
      if (grid_.contains(e0.K, e.K)) budget += e.a * e.a;
    double vol = std::pow(0.5, grid_.grid().dim * e0.K.level);
    if (budget > vol * (1.0 + 1e-12))
      throw std::invalid_argument("paraproduct coefficients violate the Carleson normalization");
  }
}

ParaproductSpec ParaproductSpec::random(const DyadicGrid& grid, int form, double fill,
                                        double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude > 1.0)
    throw std::invalid_argument("amplitude is a fraction of the maximal Carleson budget");
  Rng rng(seed);
  const Grid& g = grid.grid();
  // a_K^2 = amplitude^2 |K| / (depth+1) keeps every Carleson window within 1
  std::vector<Entry> entries;
  for (int level = 0; level < g.depth; ++level)
    for (long i = 0; i < grid.cubes_at_level(level); ++i) {
      if (rng.uniform() > fill) continue;
      Cube K = grid.cube_at(level, i);
      double vol = std::pow(0.5, g.dim * level);
      double a = amplitude * std::sqrt(vol / (g.depth + 1));
      entries.push_back({K, rng.coin() ? a : -a});
    }
  return ParaproductSpec(grid, form, std::move(entries));
}

GridFunction paraproduct_apply(const ParaproductSpec& spec, const GridFunction& f1,
                               const GridFunction& f2) {
  const DyadicGrid& d = spec.grid();
  check_same_grid(f1.grid(), d.grid());
  check_same_grid(f2.grid(), d.grid());
  GridFunction out(d.grid());
  for (const ParaproductSpec::Entry& e : spec.coeffs()) {
    double c = 0.0;
    switch (spec.form()) {
      case 1:
        c = e.a * cube_average(f1, d, e.K) * cube_average(f2, d, e.K);
        if (c != 0.0) out += c * slot_haar(d, e.K, true);
        continue;
      case 2:
        c = e.a * inner(f1, slot_haar(d, e.K, true)) * cube_average(f2, d, e.K);
        break;
      case 3:
        c = e.a * cube_average(f1, d, e.K) * inner(f2, slot_haar(d, e.K, true));
        break;
    }
    if (c == 0.0) continue;
    double scale = c / d.volume(e.K);
    d.for_each_cell(e.K, [&](long idx) { out[static_cast<std::size_t>(idx)] += scale; });
  }
  return out;
}

ModelOperator::ModelOperator(ShiftSpec s) : shift_(std::move(s)) {}
ModelOperator::ModelOperator(ParaproductSpec p) : para_(std::move(p)) {}

const DyadicGrid& ModelOperator::grid() const { return is_shift() ? shift_->grid() : para_->grid(); }

GridFunction ModelOperator::apply(const GridFunction& f1, const GridFunction& f2) const {
  return is_shift() ? shift_apply(*shift_, f1, f2) : paraproduct_apply(*para_, f1, f2);
}

// --- sparse families ----------------------------------------------------------

SparseFamily sparse_generate(const DyadicGrid& d, double zeta, std::uint64_t seed,
                             double include_prob) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("sparsity zeta must be in (0,1)");
  Rng rng(seed);
  SparseFamily s{d, zeta, {}};
  std::vector<char> taken(static_cast<std::size_t>(d.grid().cell_count()), 0);
  d.for_each_cube([&](const Cube& c) {
    if (include_prob < 1.0 && rng.uniform() > include_prob) return;
    long cells = d.footprint(c).cell_count(d.grid());
    long need = static_cast<long>(std::ceil(zeta * static_cast<double>(cells) - 1e-12));
    need = std::max<long>(need, 1);
    std::vector<long> free_cells;
    d.for_each_cell(c, [&](long idx) {
      if (!taken[static_cast<std::size_t>(idx)]) free_cells.push_back(idx);
    });
    if (static_cast<long>(free_cells.size()) < need) return;
    free_cells.resize(static_cast<std::size_t>(need));
    for (long idx : free_cells) taken[static_cast<std::size_t>(idx)] = 1;
    s.members.push_back({c, std::move(free_cells)});
  });
  return s;
}

bool sparse_verify(const SparseFamily& s, std::string* why) {
  std::vector<char> seen(static_cast<std::size_t>(s.grid.grid().cell_count()), 0);
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (const SparseFamily::Member& m : s.members) {
    DiscreteCube q = s.grid.footprint(m.cube);
    std::vector<char> inside(seen.size(), 0);
    for_each_cell(s.grid.grid(), q, [&](long idx) { inside[static_cast<std::size_t>(idx)] = 1; });
    if (static_cast<double>(m.major_cells.size()) <
        s.zeta * static_cast<double>(q.cell_count(s.grid.grid())) - 1e-9)
      return fail("major set below the zeta fraction at cube level " +
                  std::to_string(m.cube.level) + ", coord " + std::to_string(m.cube.coord[0]));
    for (long idx : m.major_cells) {
      if (!inside[static_cast<std::size_t>(idx)])
        return fail("major set leaves its cube at cell " + std::to_string(idx));
      if (seen[static_cast<std::size_t>(idx)])
        return fail("major sets overlap at cell " + std::to_string(idx));
      seen[static_cast<std::size_t>(idx)] = 1;
    }
  }
  return true;
}

double sparse_form(const SparseFamily& s, const ExponentVector& rvec,
                   const std::vector<GridFunction>& fs, const GridFunction& h) {
  if (rvec.size() != fs.size() + 1)
    throw std::invalid_argument("sparse form needs r-vector of length m+1 for m functions");
  const Grid& g = s.grid.grid();
  double total = 0.0;
  for (const SparseFamily::Member& m : s.members) {
    DiscreteCube q = s.grid.footprint(m.cube);
    double term = q.volume(g);
    for (std::size_t i = 0; i <= fs.size(); ++i) {
      const GridFunction& f = (i < fs.size()) ? fs[i] : h;
      check_same_grid(f.grid(), g);
      double rv = rvec[i].value();
      double avg = cell_average(cw_pow(f, rv), q);
      term *= std::pow(avg, 1.0 / rv);
    }
    total += term;
  }
  return total;
}

// --- square functions ----------------------------------------------------------

GridFunction square_function(const GridFunction& g, const DyadicGrid& d) {
  // cubes at a fixed level are disjoint, so the level's contribution is
  // |E_{l+1} g - E_l g|^2 pointwise
  GridFunction acc(g.grid());
  GridFunction prev = level_projection(g, d, 0);
  for (int level = 1; level <= d.grid().depth; ++level) {
    GridFunction next = level_projection(g, d, level);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      double diff = next[i] - prev[i];
      acc[i] += diff * diff;
    }
    prev = std::move(next);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::sqrt(acc[i]);
  return acc;
}

GridFunction block_square_function(const GridFunction& g, const DyadicGrid& d, int k,
                                   const CubeFamily& maximal_fam) {
  BaseMeasure leb = BaseMeasure::lebesgue(g.grid());
  GridFunction acc(g.grid());
  for (int level = 0; level + k + 1 <= d.grid().depth; ++level)
    for (long i = 0; i < d.cubes_at_level(level); ++i) {
      GridFunction m = hl_maximal(block_diff(g, d, d.cube_at(level, i), k), leb, maximal_fam);
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += m[c] * m[c];
    }
  for (std::size_t c = 0; c < acc.size(); ++c) acc[c] = std::sqrt(acc[c]);
  return acc;
}

ProductGridFunction slice_maximal(const ProductGridFunction& f, const CubeFamily& fam2) {
  BaseMeasure leb = BaseMeasure::lebesgue(f.grid2());
  ProductGridFunction out(f.grid1(), f.grid2());
  for (long i1 = 0; i1 < f.n1(); ++i1)
    out.set_slice1(i1, hl_maximal(f.slice1(i1), leb, fam2));
  return out;
}

ProductGridFunction slice_block_diff(const ProductGridFunction& f, const DyadicGrid& d2,
                                     const Cube& V, int v1) {
  check_same_grid(f.grid2(), d2.grid());
  ProductGridFunction out(f.grid1(), f.grid2());
  for (long i1 = 0; i1 < f.n1(); ++i1)
    out.set_slice1(i1, block_diff(f.slice1(i1), d2, V, v1));
  return out;
}

// --- tensor model operators -----------------------------------------------------

namespace {

// <f, h>_2 as a function of x1
GridFunction pair_slice(const ProductGridFunction& f, const GridFunction& h2) {
  GridFunction out(f.grid1());
  double vol2 = f.grid2().cell_volume();
  for (long i1 = 0; i1 < f.n1(); ++i1) {
    double s = 0.0;
    for (long i2 = 0; i2 < f.n2(); ++i2)
      s += f.at(i1, i2) * h2[static_cast<std::size_t>(i2)];
    out[static_cast<std::size_t>(i1)] = s * vol2;
  }
  return out;
}

// <f>_{V,2} as a function of x1
GridFunction avg_slice(const ProductGridFunction& f, const DyadicGrid& d2, const Cube& V) {
  GridFunction out(f.grid1());
  DiscreteCube q = d2.footprint(V);
  double cells = static_cast<double>(q.cell_count(d2.grid()));
  for (long i1 = 0; i1 < f.n1(); ++i1) {
    double s = 0.0;
    for_each_cell(d2.grid(), q, [&](long i2) { s += f.at(i1, i2); });
    out[static_cast<std::size_t>(i1)] = s / cells;
  }
  return out;
}

void add_tensor(ProductGridFunction& acc, const GridFunction& u, const GridFunction& v,
                double scale) {
  for (long i1 = 0; i1 < acc.n1(); ++i1) {
    double uz = u[static_cast<std::size_t>(i1)] * scale;
    if (uz == 0.0) continue;
    for (long i2 = 0; i2 < acc.n2(); ++i2)
      acc.at(i1, i2) += uz * v[static_cast<std::size_t>(i2)];
  }
}

}  // namespace

ProductGridFunction tensor_apply(const ModelOperator& op1, const ModelOperator& op2,
                                 const ProductGridFunction& f1, const ProductGridFunction& f2) {
  const DyadicGrid& d2 = op2.grid();
  check_same_grid(f1.grid1(), op1.grid().grid());
  check_same_grid(f1.grid2(), d2.grid());
  check_same_grid(f2.grid1(), op1.grid().grid());
  check_same_grid(f2.grid2(), d2.grid());
  ProductGridFunction out(f1.grid1(), f1.grid2());

  if (op2.is_shift()) {
    const ShiftSpec& spec = op2.shift();
    int noncancel = static_cast<int>(spec.form());
    for (const ShiftSpec::Entry& e : spec.coeffs()) {
      GridFunction g1 = pair_slice(f1, slot_haar(d2, e.I1, noncancel != 1));
      GridFunction g2 = pair_slice(f2, slot_haar(d2, e.I2, noncancel != 2));
      GridFunction u = op1.apply(g1, g2);
      add_tensor(out, u, slot_haar(d2, e.I3, noncancel != 3), e.a);
    }
    return out;
  }

  const ParaproductSpec& spec = op2.para();
  for (const ParaproductSpec::Entry& e : spec.coeffs()) {
    GridFunction g1 = (spec.form() == 2) ? pair_slice(f1, slot_haar(d2, e.K, true))
                                         : avg_slice(f1, d2, e.K);
    GridFunction g2 = (spec.form() == 3) ? pair_slice(f2, slot_haar(d2, e.K, true))
                                         : avg_slice(f2, d2, e.K);
    GridFunction u = op1.apply(g1, g2);
    if (spec.form() == 1) {
      add_tensor(out, u, slot_haar(d2, e.K, true), e.a);
    } else {
      GridFunction indicator(d2.grid());
      double inv_vol = 1.0 / d2.volume(e.K);
      d2.for_each_cell(e.K, [&](long idx) { indicator[static_cast<std::size_t>(idx)] = inv_vol; });
      add_tensor(out, u, indicator, e.a);
    }
  }
  return out;
}

}  // namespace aprlab
