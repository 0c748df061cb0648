#include "aprlab/exponents.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace aprlab {

Exponent Exponent::from_value(const Rational& p) {
  if (p <= 0) throw std::invalid_argument("exponent value must be positive, got " + to_string(p));
  return Exponent(Rational(1) / p);
}

Exponent Exponent::from_reciprocal(const Rational& inv) {
  if (inv < 0)
    throw std::invalid_argument("primal exponent reciprocal must be >= 0, got " + to_string(inv));
  return Exponent(inv);
}

Rational Exponent::value_exact() const {
  if (inv_ == 0) throw std::domain_error("exponent is infinite, no exact finite value");
  return Rational(1) / inv_;
}

double Exponent::value() const {
  if (inv_ == 0) return std::numeric_limits<double>::infinity();
  return 1.0 / to_double(inv_);
}

double SignedReciprocal::value() const {
  if (inv == 0) return std::numeric_limits<double>::infinity();
  return 1.0 / to_double(inv);
}

Rational SignedReciprocal::value_exact() const {
  if (inv == 0) throw std::domain_error("reciprocal is zero, value is infinite");
  return Rational(1) / inv;
}

Exponent SignedReciprocal::as_exponent() const {
  if (inv < 0)
    throw std::domain_error("negative reciprocal " + to_string(inv) +
                            " is a dual-slot value, not a primal exponent");
  return Exponent::from_reciprocal(inv);
}

Exponent parse_exponent(std::string_view s) {
  if (s == "inf" || s == "infinity") return Exponent::infinity();
  constexpr std::string_view kInvPrefix = "1/p=";
  if (s.substr(0, kInvPrefix.size()) == kInvPrefix)
    return Exponent::from_reciprocal(parse_rational(s.substr(kInvPrefix.size())));
  return Exponent::from_value(parse_rational(s));
}

std::string format_exponent(const Exponent& e) {
  if (e.is_infinity()) return "inf";
  Rational v = e.value_exact();
  if (v.denominator() == 1 || v.numerator() >= v.denominator()) return to_string(v);
  // p < 1 prints via its reciprocal so the round-trip stays exact and readable
  return "1/p=" + to_string(e.reciprocal());
}

ExponentVector::ExponentVector(std::vector<Exponent> entries, VectorKind kind)
    : entries_(std::move(entries)), kind_(kind) {
  if (entries_.empty()) throw std::invalid_argument("exponent vector must be non-empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Rational& inv = entries_[i].reciprocal();
    if (kind_ == VectorKind::RVector) {
      if (inv <= 0 || inv > 1)
        throw std::invalid_argument("R-vector entry " + std::to_string(i + 1) +
                                    " must satisfy 1 <= r < inf");
    } else {
      if (inv > 1)
        throw std::invalid_argument("P-vector entry " + std::to_string(i + 1) +
                                    " must satisfy 1 <= p <= inf");
    }
  }
}

Exponent ExponentVector::reciprocal_sum() const { return aprlab::reciprocal_sum(entries_); }

ExponentVector p_vector(std::vector<Exponent> entries) {
  return ExponentVector(std::move(entries), VectorKind::PVector);
}

ExponentVector r_vector(std::vector<Exponent> entries) {
  return ExponentVector(std::move(entries), VectorKind::RVector);
}

Exponent reciprocal_sum(const std::vector<Exponent>& exps) {
  Rational acc(0);
  for (const Exponent& e : exps) acc += e.reciprocal();
  return Exponent::from_reciprocal(acc);
}

SignedReciprocal dual(const Exponent& e) { return SignedReciprocal{Rational(1) - e.reciprocal()}; }

namespace {

void check_pair_shape(const ExponentVector& r, const ExponentVector& p) {
  if (r.kind() != VectorKind::RVector || p.kind() != VectorKind::PVector)
    throw std::invalid_argument("ordering predicates take (R-vector, P-vector)");
  if (r.size() != p.size() + 1)
    throw std::invalid_argument("R-vector must have exactly one more entry than the P-vector (got " +
                                std::to_string(r.size()) + " vs " + std::to_string(p.size()) + ")");
}

std::vector<SignedReciprocal> delta_invs(const ExponentVector& p, const ExponentVector& r) {
  const std::size_t m = p.size();
  std::vector<SignedReciprocal> d(m + 1);
  for (std::size_t i = 0; i < m; ++i)
    d[i].inv = r[i].reciprocal() - p[i].reciprocal();
  // 1/delta_{m+1} = 1/r_{m+1} - (1 - 1/p)
  d[m].inv = r[m].reciprocal() - (Rational(1) - p.reciprocal_sum().reciprocal());
  return d;
}

}  // namespace

bool preceq_star(const ExponentVector& r, const ExponentVector& p) {
  check_pair_shape(r, p);
  for (const SignedReciprocal& d : delta_invs(p, r))
    if (d.inv < 0) return false;
  return true;
}

bool prec(const ExponentVector& r, const ExponentVector& p) {
  check_pair_shape(r, p);
  for (const SignedReciprocal& d : delta_invs(p, r))
    if (d.inv <= 0) return false;
  return true;
}

bool preceq(const ExponentVector& r, const ExponentVector& p) {
  check_pair_shape(r, p);
  auto d = delta_invs(p, r);
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    if (d[i].inv < 0) return false;
  return d.back().inv > 0;
}

Rational DerivedScales::min_delta_inv() const {
  Rational m = deltas.front().inv;
  for (const SignedReciprocal& d : deltas) m = std::min(m, d.inv);
  return m;
}

DerivedScales derived_scales(const ExponentVector& p, const ExponentVector& r) {
  check_pair_shape(r, p);
  const std::size_t m = p.size();
  DerivedScales out;
  out.deltas = delta_invs(p, r);
  for (std::size_t i = 0; i < out.deltas.size(); ++i)
    if (out.deltas[i].inv < 0)
      throw std::invalid_argument("r preceq_star p fails at index " + std::to_string(i + 1) +
                                  ": 1/delta = " + to_string(out.deltas[i].inv) + " < 0");
  Rational inv_r(0);
  for (std::size_t i = 0; i <= m; ++i) inv_r += r[i].reciprocal();
  out.r = Exponent::from_reciprocal(inv_r);
  out.p_next = SignedReciprocal{Rational(1) - p.reciprocal_sum().reciprocal()};

  Rational delta_sum(0);
  for (const SignedReciprocal& d : out.deltas) delta_sum += d.inv;
  assert(delta_sum == inv_r - 1);

  return out;
}

Gamma gamma(const Exponent& p, const Exponent& r) {
  if (p.reciprocal() > 1)
    throw std::invalid_argument("gamma requires 1 <= p <= inf, got p = " + format_exponent(p));
  Rational g = r.reciprocal() + (Rational(1) - p.reciprocal());
  return Gamma{g, g == 0};
}

OffdiagTargets offdiag_targets(const Exponent& p0, const Exponent& r0, const Exponent& q0,
                               const Exponent& p) {
  if (p0.reciprocal() > 1)
    throw std::invalid_argument("offdiag_targets requires 1 <= p0 <= inf");
  if (p.reciprocal() >= 1)
    throw std::invalid_argument("offdiag_targets requires 1 < p <= inf, got p = " +
                                format_exponent(p));
  if (gamma(p0, r0).trivial)
    throw std::invalid_argument(
        "gamma_{p0,r0} = 0 (p0 = 1, r0 = inf): nothing to prove, the class is trivial");

  Rational shift = p.reciprocal() - p0.reciprocal();
  Rational inv_r = r0.reciprocal() + shift;
  Rational inv_q = q0.reciprocal() + shift;
  if (inv_r <= 0)
    throw std::invalid_argument("target violates 0 < r < inf: 1/r = " + to_string(inv_r) +
                                " (r = inf excluded)");
  if (inv_q < 0)
    throw std::invalid_argument("target violates 0 < q <= inf: 1/q = " + to_string(inv_q));
  return OffdiagTargets{Exponent::from_reciprocal(inv_r), Exponent::from_reciprocal(inv_q)};
}

LemmaScales lemma_scales(const ExponentVector& p, const ExponentVector& r) {
  DerivedScales ds = derived_scales(p, r);
  const std::size_t m = p.size();

  LemmaScales out;
  // 1/rho = 1/r_m - 1/r_{m+1}' + sum_{i<m} 1/p_i
  Rational inv_rho = r[m - 1].reciprocal() - (Rational(1) - r[m].reciprocal());
  for (std::size_t i = 0; i + 1 < m; ++i) inv_rho += p[i].reciprocal();
  assert(inv_rho == ds.deltas[m - 1].inv + ds.deltas[m].inv);
  if (inv_rho <= 0)
    throw std::invalid_argument("factorization lemma hypothesis fails: 1/rho = " +
                                to_string(inv_rho) + " <= 0");
  out.rho = SignedReciprocal{inv_rho};

  Rational total = ds.r.reciprocal() - 1;  // (1-r)/r = sum_j 1/delta_j
  out.thetas.resize(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    Rational inv_theta = total - ds.deltas[i].inv;
    if (inv_theta <= 0)
      throw std::invalid_argument("factorization lemma hypothesis fails: 1/theta_" +
                                  std::to_string(i + 1) + " = " + to_string(inv_theta) + " <= 0");
    out.thetas[i] = SignedReciprocal{inv_theta};
  }
  return out;
}

std::vector<ExponentVector> extrapolation_path(const ExponentVector& p_start,
                                               const ExponentVector& q_target,
                                               const ExponentVector& r) {
  if (p_start.size() != q_target.size())
    throw std::invalid_argument("start and target exponent vectors differ in length");
  if (!preceq_star(r, p_start))
    throw std::invalid_argument("extrapolation_path requires r preceq_star p_start");
  if (!prec(r, q_target))
    throw std::invalid_argument("extrapolation_path requires r prec q_target");

  if (p_start == q_target) return {};

  const std::size_t m = p_start.size();
  const Rational boundary = Rational(1) - r[m].reciprocal();  // 1/r_{m+1}'

  // Process coordinates in decreasing order of how much the move raises 1/t.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < m; ++i)
    if (p_start[i] != q_target[i]) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    Rational da = q_target[a].reciprocal() - p_start[a].reciprocal();
    Rational db = q_target[b].reciprocal() - p_start[b].reciprocal();
    return da > db;
  });

  std::vector<ExponentVector> path;
  path.push_back(p_start);
  std::vector<Exponent> current = p_start.entries();
  for (std::size_t idx : order) {
    current[idx] = q_target[idx];
    path.emplace_back(current, VectorKind::PVector);
  }

  // The theorem guarantees all intermediate tuples stay strictly inside the
  // r_{m+1}' boundary once the first coordinate has moved.
  for (std::size_t step = 1; step < path.size(); ++step) {
    const ExponentVector& t = path[step];
    if (!preceq_star(r, t) || t.reciprocal_sum().reciprocal() <= boundary)
      throw std::logic_error("extrapolation path left the admissible region at step " +
                             std::to_string(step));
  }
  return path;
}

}  // namespace aprlab
