#pragma once

#include "aprlab/cubes.hpp"
#include "aprlab/exponents.hpp"
#include "aprlab/grid.hpp"
#include "aprlab/weights.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace aprlab {

using PositiveOperator = std::function<GridFunction(const GridFunction&)>;
using NormFunctional = std::function<double(const GridFunction&)>;

// How to certify an operator-norm bound B for the maximal function.
struct BoundMode {
  enum class Kind { Buckley, Empirical };
  Kind kind = Kind::Empirical;
  int trials = 48;
  int power_iters = 3;
  double safety = 2.0;
  std::uint64_t seed = 7;
};

// Bound for ||M||_{L^t(u dx)} with M the maximal over fam; requires t > 1.
// buckley returns c(d,t) [u]_{A_t}^{1/(t-1)}; empirical multiplies the worst
// observed ratio (random inputs plus power iteration) by the safety factor.
double maximal_norm_bound_M(const Exponent& t, const Weight& u, const CubeFamily& fam,
                            const BoundMode& mode);

// Bound for M'h = M(h u)/u acting on L^{t'}(u dx).  By duality this is
// ||M||_{L^{t'}(sigma)} with sigma = u^{1-t'}.
double maximal_norm_bound_Mprime(const Exponent& t, const Weight& u, const CubeFamily& fam,
                                 const BoundMode& mode);

struct RdFCerts {
  bool domination = false;         // h <= R_K h cellwise
  double norm_ratio = 0.0;         // ||R_K h|| / ||h|| when a norm was supplied
  double a1_pointwise_ratio = 0.0; // max_x M(R_K h) / R_K h
  bool truncated_a1 = false;       // M(R_K h) <= 2B R_{K+1} h cellwise
  double tail_ratio = 0.0;         // max_x (R_{K+1} h - R_K h) / R_K h
};

struct RdFResult {
  GridFunction majorant;       // R_K h = sum_{k<=K} M^{(k)}h / (2B)^k
  GridFunction majorant_next;  // R_{K+1} h
  double B = 1.0;
  int K = 0;
  double tail_bound = 0.0;     // (2B/(2B-1)) max(h) (2B)^{-K}
  RdFCerts certs;
};

// Truncated Rubio de Francia series.  h >= 0, B > 0, K >= 0.  The norm
// functional, when given, feeds the norm_ratio certificate.
RdFResult rdf_iterate(const GridFunction& h, const PositiveOperator& M, double B, int K,
                      const NormFunctional& norm = {});

// One extrapolation weight construction with its numeric certificates.
struct OffdiagConstruction {
  int case_id = 0;
  GridFunction h;           // the auxiliary function the algorithm majorizes
  GridFunction H;           // the Rubio de Francia majorant, rescaled
  Weight W;                 // the constructed weight, claimed in A_{p0,r0}
  double B = 1.0;
  int K = 0;
  ConstantCert w_constant;  // [w]_{A_{p,r}}
  ConstantCert W_constant;  // [W]_{A_{p0,r0}}
  std::vector<CertEntry> certs;
  std::vector<std::pair<std::string, double>> reports;
  bool short_circuit = false;  // ||g w||_{L^p} = 0: nothing to construct
  DiscreteCube ball{{0, 0}, 1};  // case 3: the discrete ball of h
};

// Case 1 (downward): 1/s = 1/p - 1/p0 = 1/r - 1/r0 > 0.  Builds
// W = H^{-p/s} w^{1+p'/s} from the dual-weighted algorithm applied to
// h = g w^{p'} / ||g w||_{L^p}.
OffdiagConstruction construct_case1(const Weight& w, const GridFunction& g, const Exponent& p,
                                    const Exponent& r, const Exponent& p0, const Exponent& r0,
                                    const Exponent& q0, int K, const CubeFamily& fam,
                                    const BoundMode& mode = {});

// Case 2 (upward, q < inf): 1/s = 1/p0 - 1/p = 1/q0 - 1/q = 1/r0 - 1/r > 0.
// h is the duality witness, normalized internally in L^{s/q0}(w^q dx);
// W = H^{1/q0} w^{q/q0}.
OffdiagConstruction construct_case2(const Weight& w, const GridFunction& h, const Exponent& p,
                                    const Exponent& r, const Exponent& p0, const Exponent& r0,
                                    const Exponent& q0, const Exponent& q, int K,
                                    const CubeFamily& fam, const BoundMode& mode = {});

// The canonical extremal witness h = |f|^{q - q0} for the duality step of
// case 2 (finite-dimensional duality is exact).
GridFunction case2_canonical_witness(const GridFunction& f, const Exponent& q,
                                     const Exponent& q0);

// Case 3 (upward, q = inf): 1/s = 1/p0 - 1/p = 1/q0 = 1/r0 - 1/r > 0.
// h is the normalized indicator of the discrete ball of scale tau0 around
// the cell x0; W = H^{1/q0} w.
OffdiagConstruction construct_case3(const Weight& w, long x0_cell, double tau0, const Exponent& p,
                                    const Exponent& r, const Exponent& p0, const Exponent& r0,
                                    const Exponent& q0, int K, const CubeFamily& fam,
                                    const BoundMode& mode = {});

// (avg over the case-3 ball of (f w)^{q0})^{1/q0}
double case3_local_average(const OffdiagConstruction& c, const GridFunction& f, const Weight& w,
                           const Exponent& q0);

}  // namespace aprlab
