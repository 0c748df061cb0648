#pragma once

#include "aprlab/cubes.hpp"
#include "aprlab/dyadic.hpp"
#include "aprlab/exponents.hpp"
#include "aprlab/grid.hpp"
#include "aprlab/random.hpp"
#include "aprlab/weights.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace aprlab {

// Mf(x) = sup over cubes of the family containing x of the mu-average of |f|.
GridFunction hl_maximal(const GridFunction& f, const BaseMeasure& mu, const CubeFamily& fam);

// dyadic maximal with underlying measure w dx
GridFunction weighted_dyadic_maximal(const GridFunction& f, const Weight& w, const DyadicGrid& d);

// M(f1,f2)(x) = sup over cubes containing x of <|f1|>_Q <|f2|>_Q
GridFunction bilinear_maximal(const GridFunction& f1, const GridFunction& f2,
                              const CubeFamily& fam);

// --- bilinear dyadic model operators ---------------------------------------

// which slot carries the non-cancellative Haar factor
enum class ShiftForm { NoncancelSlot1 = 1, NoncancelSlot2 = 2, NoncancelSlot3 = 3 };

class ShiftSpec {
 public:
  struct Entry {
    Cube K, I1, I2, I3;
    double a;
  };

  // Validates ancestry (I_i^{(k_i)} = K), depth room for the cancellative
  // slots, and the size bound |a| <= |I1|^{1/2}|I2|^{1/2}|I3|^{1/2} / |K|^2.
  ShiftSpec(DyadicGrid grid, std::array<int, 3> complexity, ShiftForm form,
            std::vector<Entry> coeffs);

  // Every admissible key, coefficients at amplitude x (maximal size), each
  // kept with probability fill, random signs.
  static ShiftSpec random(const DyadicGrid& grid, std::array<int, 3> complexity, ShiftForm form,
                          double fill, double amplitude, std::uint64_t seed);

  const DyadicGrid& grid() const { return grid_; }
  const std::array<int, 3>& complexity() const { return complexity_; }
  ShiftForm form() const { return form_; }
  const std::vector<Entry>& coeffs() const { return coeffs_; }
  static double size_bound(const DyadicGrid& grid, const Entry& e);

 private:
  DyadicGrid grid_;
  std::array<int, 3> complexity_;
  ShiftForm form_;
  std::vector<Entry> coeffs_;
};

GridFunction shift_apply(const ShiftSpec& spec, const GridFunction& f1, const GridFunction& f2);

// form 1: a_K <f1>_K <f2>_K h_K
// form 2: a_K <f1,h_K> <f2>_K 1_K/|K|
// form 3: a_K <f1>_K <f2,h_K> 1_K/|K|
class ParaproductSpec {
 public:
  struct Entry {
    Cube K;
    double a;
  };

  // Verifies the Carleson normalization sup_{K0} (|K0|^{-1} sum_{K subset K0}
  // a_K^2)^{1/2} <= 1 over the lattice.
  ParaproductSpec(DyadicGrid grid, int form, std::vector<Entry> coeffs);

  static ParaproductSpec random(const DyadicGrid& grid, int form, double fill, double amplitude,
                                std::uint64_t seed);

  const DyadicGrid& grid() const { return grid_; }
  int form() const { return form_; }
  const std::vector<Entry>& coeffs() const { return coeffs_; }

 private:
  DyadicGrid grid_;
  int form_;
  std::vector<Entry> coeffs_;
};

GridFunction paraproduct_apply(const ParaproductSpec& spec, const GridFunction& f1,
                               const GridFunction& f2);

// A shift or a paraproduct, usable wherever either model operator fits.
class ModelOperator {
 public:
  ModelOperator(ShiftSpec s);        // NOLINT implicit by design
  ModelOperator(ParaproductSpec p);  // NOLINT
  const DyadicGrid& grid() const;
  bool is_shift() const { return shift_.has_value(); }
  const ShiftSpec& shift() const { return *shift_; }
  const ParaproductSpec& para() const { return *para_; }
  GridFunction apply(const GridFunction& f1, const GridFunction& f2) const;

 private:
  std::optional<ShiftSpec> shift_;
  std::optional<ParaproductSpec> para_;
};

// --- sparse families --------------------------------------------------------

struct SparseFamily {
  struct Member {
    Cube cube;
    std::vector<long> major_cells;  // E_Q, global finest-cell indices
  };
  DyadicGrid grid;
  double zeta = 0.5;
  std::vector<Member> members;
};

// Greedy top-down selection reserving a zeta-fraction of every adopted cube;
// cubes whose remaining free cells cannot cover the fraction are dropped, so
// the result always verifies.  include_prob < 1 subsamples the candidates.
SparseFamily sparse_generate(const DyadicGrid& d, double zeta, std::uint64_t seed,
                             double include_prob = 1.0);

bool sparse_verify(const SparseFamily& s, std::string* why = nullptr);

// sum_Q |Q| prod_i <|f_i|^{r_i}>_Q^{1/r_i} * <|h|^{r_{m+1}}>_Q^{1/r_{m+1}}
double sparse_form(const SparseFamily& s, const ExponentVector& rvec,
                   const std::vector<GridFunction>& fs, const GridFunction& h);

// --- square functions and slice operators ----------------------------------

// (sum_{J, level < L} |Delta_J g|^2)^{1/2}
GridFunction square_function(const GridFunction& g, const DyadicGrid& d);
// (sum_I (M(Delta_{I,k} g))^2)^{1/2} with M the maximal over maximal_fam
GridFunction block_square_function(const GridFunction& g, const DyadicGrid& d, int k,
                                   const CubeFamily& maximal_fam);

// M^2 f(x) = M(f(x1, .))(x2), maximal over fam2 in the second variable
ProductGridFunction slice_maximal(const ProductGridFunction& f, const CubeFamily& fam2);
// Delta^2_{V,v1} f(x) = sum_{J^{(v1)} = V} Delta_J (f(x1, .))(x2)
ProductGridFunction slice_block_diff(const ProductGridFunction& f, const DyadicGrid& d2,
                                     const Cube& V, int v1);

// (U_A tensor U_B)(f1, f2) on the product grid: U_B is expanded in the second
// variable and U_A applied to the slice coefficient functions.
ProductGridFunction tensor_apply(const ModelOperator& op1, const ModelOperator& op2,
                                 const ProductGridFunction& f1, const ProductGridFunction& f2);

}  // namespace aprlab
