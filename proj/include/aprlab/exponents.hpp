#pragma once

#include "aprlab/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aprlab {

// A Lebesgue exponent p in (0, inf], stored by its reciprocal 1/p.
// inv == 0 encodes p = inf; inv > 1 encodes p < 1 (legal for sums of
// reciprocals).  Negative reciprocals never live here; they belong to
// dual slots, see SignedReciprocal.
class Exponent {
 public:
  Exponent() : inv_(1) {}

  static Exponent from_value(const Rational& p);
  static Exponent from_reciprocal(const Rational& inv);
  static Exponent infinity() { return Exponent(Rational(0)); }

  const Rational& reciprocal() const { return inv_; }
  bool is_infinity() const { return inv_ == 0; }

  // The exact value p = 1/inv; throws for p = inf.
  Rational value_exact() const;
  // 1/inv as a double, +inf when the exponent is infinite.
  double value() const;

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.inv_ == b.inv_; }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return a.inv_ != b.inv_; }
  // p <= q  <=>  1/p >= 1/q (both sides live in (0, inf])
  friend bool operator<=(const Exponent& a, const Exponent& b) { return a.inv_ >= b.inv_; }
  friend bool operator<(const Exponent& a, const Exponent& b) { return a.inv_ > b.inv_; }
  friend bool operator>=(const Exponent& a, const Exponent& b) { return a.inv_ <= b.inv_; }
  friend bool operator>(const Exponent& a, const Exponent& b) { return a.inv_ < b.inv_; }

 private:
  explicit Exponent(Rational inv) : inv_(std::move(inv)) {}
  Rational inv_;  // 1/p, >= 0
};

// Reciprocal of a dual slot (p', p_{m+1}, 1/delta_i, ...).  May be zero or
// negative; cannot be used as a primal Exponent without an explicit,
// checked conversion.
struct SignedReciprocal {
  Rational inv;

  bool is_zero() const { return inv == 0; }
  bool is_positive() const { return inv > 0; }
  // The value 1/inv as a double; +inf when inv == 0, negative when inv < 0.
  double value() const;
  // Exact value, throws when inv == 0.
  Rational value_exact() const;
  // Checked conversion to a primal exponent (requires inv >= 0).
  Exponent as_exponent() const;

  friend bool operator==(const SignedReciprocal& a, const SignedReciprocal& b) {
    return a.inv == b.inv;
  }
};

// Serialization used in JSON configs: "p/q", "inf", or "1/p=<rational>".
Exponent parse_exponent(std::string_view s);
std::string format_exponent(const Exponent& e);

enum class VectorKind { PVector, RVector };

// Ordered exponent tuple.  R-vectors require 1 <= r_i < inf, P-vectors
// 1 <= p_i <= inf; both are checked at construction.
class ExponentVector {
 public:
  ExponentVector(std::vector<Exponent> entries, VectorKind kind);

  const std::vector<Exponent>& entries() const { return entries_; }
  VectorKind kind() const { return kind_; }
  std::size_t size() const { return entries_.size(); }
  const Exponent& operator[](std::size_t i) const { return entries_[i]; }

  // Sum of the reciprocals, as an exponent: 1/p = sum_i 1/p_i.
  Exponent reciprocal_sum() const;

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
    return a.kind_ == b.kind_ && a.entries_ == b.entries_;
  }

 private:
  std::vector<Exponent> entries_;
  VectorKind kind_;
};

ExponentVector p_vector(std::vector<Exponent> entries);
ExponentVector r_vector(std::vector<Exponent> entries);

// 1/p = sum_i 1/p_i, exact.  Result may have p < 1.
Exponent reciprocal_sum(const std::vector<Exponent>& exps);

// 1/p' = 1 - 1/p; negative for p < 1, zero for p = 1.
SignedReciprocal dual(const Exponent& e);

// Scales derived from a compatible pair (p_vec, r_vec):
//   1/r = sum_{i=1}^{m+1} 1/r_i,   1/p_{m+1} = 1 - 1/p,
//   1/delta_i = 1/r_i - 1/p_i  (i = 1..m+1, with p_{m+1} the dual slot).
struct DerivedScales {
  Exponent r;
  SignedReciprocal p_next;                // 1/p_{m+1}, may be <= 0
  std::vector<SignedReciprocal> deltas;   // length m+1, all inv >= 0 under preceq_star

  // min_i 1/delta_i, handy for the ordering predicates.
  Rational min_delta_inv() const;
};

// r_vec preceq_star p_vec: r_i <= p_i for all i and r_{m+1}' >= p.
bool preceq_star(const ExponentVector& r, const ExponentVector& p);
// r_vec prec p_vec: strict in every entry and r_{m+1}' > p.
bool prec(const ExponentVector& r, const ExponentVector& p);
// r_vec preceq p_vec: preceq_star plus r_{m+1}' > p (the non-starred order).
bool preceq(const ExponentVector& r, const ExponentVector& p);

// Requires r preceq_star p; throws naming the first failing index otherwise.
DerivedScales derived_scales(const ExponentVector& p, const ExponentVector& r);

struct Gamma {
  Rational value;  // gamma_{p,r} = 1/r + 1/p' >= 0
  bool trivial;    // gamma == 0, i.e. p = 1 and r = inf: the class forces v ~ 1
};

// gamma_{p,r} = 1/r + 1/p'.  Requires 1 <= p <= inf and 0 < r <= inf.
Gamma gamma(const Exponent& p, const Exponent& r);

// Solves 1/q - 1/q0 = 1/r - 1/r0 = 1/p - 1/p0 for (r, q) given the
// starting triple and the target p.  Requires 1 <= p0 <= inf,
// 0 < r0, q0 <= inf, 1 < p <= inf; rejects solutions outside
// 0 < r < inf, 0 < q <= inf, and the degenerate gamma_{p0,r0} = 0 case.
struct OffdiagTargets {
  Exponent r;
  Exponent q;
};
OffdiagTargets offdiag_targets(const Exponent& p0, const Exponent& r0, const Exponent& q0,
                               const Exponent& p);

// Scales of the factorization lemma:
//   1/rho     = 1/r_m - 1/r_{m+1}' + sum_{i<m} 1/p_i = 1/delta_m + 1/delta_{m+1}
//   1/theta_i = (1-r)/r - 1/delta_i,  i = 1..m-1.
// Both must be positive; throws naming the failing hypothesis otherwise.
struct LemmaScales {
  SignedReciprocal rho;
  std::vector<SignedReciprocal> thetas;  // length m-1
};
LemmaScales lemma_scales(const ExponentVector& p, const ExponentVector& r);

// One-coordinate extrapolation schedule from p_start to q_target.
// Requires r preceq_star p_start and r prec q_target.  Returns the full
// sequence t^0 = p_start, ..., t^N = q_target where consecutive vectors
// differ in exactly one entry; empty when p_start == q_target.  Greedy:
// each step changes the coordinate whose move most increases 1/t, ties
// broken by lowest index.
std::vector<ExponentVector> extrapolation_path(const ExponentVector& p_start,
                                               const ExponentVector& q_target,
                                               const ExponentVector& r);

}  // namespace aprlab
