#pragma once

#include <algorithm>

#include "apportion/audit.hpp"
#include "apportion/poisson_binomial.hpp"
#include "apportion/sampford.hpp"

namespace apportion {

namespace detail {

inline Rat f_sum_over_size(const ResidueProfile& p, int size) {
  Rat total = 0;
  for (Subset a : enumerate_k_subsets(p.n(), size)) total += sampford_f(a, p);
  return total;
}

inline Rat poisson_point_mass_sum(const ResidueProfile& p, int size) {
  // sum over |A| = size of prod_{A} p_j prod_{notin A} (1-p_j)
  Rat total = 0;
  for (Subset a : enumerate_k_subsets(p.n(), size)) {
    Rat prod = 1;
    for (int i = 1; i <= p.n(); ++i)
      prod *= subset_contains(a, i) ? p.p(i) : 1 - p.p(i);
    total += prod;
  }
  return total;
}

inline ResidueProfile perturb(const ResidueProfile& p, int grow, int shrink,
                              const Rat& amount) {
  std::vector<Rat> values = p.residues;
  values[grow - 1] += amount;
  values[shrink - 1] -= amount;
  if (values[grow - 1] >= 1 || values[grow - 1] < 0 || values[shrink - 1] < 0 ||
      values[shrink - 1] >= 1)
    throw std::invalid_argument("perturbation leaves the residue domain");
  return validate_residues(std::move(values), Rat(0));
}

}  // namespace detail

// Sum over all size-k subsets of f(A) equals E[1{|B|<k}(k-|B|)] equals
// (1/2) E[ | |B|-k | ]; all three routes computed independently and compared
// exactly.
inline AuditVerdict verify_denominator_identity(const ResidueProfile& p) {
  Rat lhs = detail::f_sum_over_size(p, p.k);
  Rat mid = truncated_deficit(p);
  PoissonTrialStats stats = poisson_binomial(p);
  Rat rhs = 0;
  for (int l = 0; l < static_cast<int>(stats.pmf.size()); ++l)
    rhs += Rat(std::abs(l - p.k)) * stats.pmf[l];
  rhs /= 2;
  AuditVerdict v;
  v.axiom = "denominator-identity";
  v.values = {{"subset_sum", lhs}, {"truncated_deficit", mid}, {"half_abs_dev", rhs}};
  v.outcome = (lhs == mid && mid == rhs) ? Outcome::satisfied : Outcome::violated;
  return v;
}

// One telescoping step: sum_{|A|=l+1} f(A) - sum_{|A|=l} f(A)
// = (k-l) * sum_{|A|=l} prod p prod (1-p).
inline AuditVerdict verify_telescoping_step(const ResidueProfile& p, int l) {
  if (l < 0 || l > p.n() - 1)
    return detail::inconclusive("telescoping-step", "need 0 <= l <= n-1");
  Rat lhs = detail::f_sum_over_size(p, l + 1) - detail::f_sum_over_size(p, l);
  Rat rhs = Rat(p.k - l) * detail::poisson_point_mass_sum(p, l);
  AuditVerdict v;
  v.axiom = "telescoping-step";
  v.witness = "l=" + std::to_string(l);
  v.values = {{"lhs", lhs}, {"rhs", rhs}};
  v.outcome = lhs == rhs ? Outcome::satisfied : Outcome::violated;
  return v;
}

// E[ | |B|-k | ] <= 2s, with the parties relabeled so that [k] holds the k
// largest residues (the labeling under which the bound is stated).
inline AuditVerdict verify_expectation_bound(const ResidueProfile& p) {
  std::vector<Rat> sorted = p.residues;
  std::sort(sorted.begin(), sorted.end(), std::greater<Rat>());
  Rat s = 0;
  for (int i = 0; i < p.k; ++i) s += 1 - sorted[i];
  PoissonTrialStats stats = poisson_binomial(p);
  Rat expectation = 0;
  for (int l = 0; l < static_cast<int>(stats.pmf.size()); ++l)
    expectation += Rat(std::abs(l - p.k)) * stats.pmf[l];
  AuditVerdict v;
  v.axiom = "expectation-bound";
  v.values = {{"E_abs_dev", expectation}, {"2s", 2 * s}};
  v.outcome = expectation <= 2 * s ? Outcome::satisfied : Outcome::violated;
  return v;
}

// Directional derivative of the truncated deficit along +e_1 - e_n equals
// (p_n - p_1) * P[|B-hat| = k-1], checked by central finite difference.
inline AuditVerdict verify_derivative_formula(const ResidueProfile& p,
                                              const Rat& step = Rat(1, 100000),
                                              const Rat& tolerance = Rat(1, 100000000)) {
  const std::string axiom = "deficit-derivative-formula";
  if (p.n() < 2) return detail::inconclusive(axiom, "need n >= 2");
  int first = 1, last = p.n();
  Rat half = step / 2;
  Rat plus, minus;
  try {
    plus = truncated_deficit(detail::perturb(p, first, last, half));
    minus = truncated_deficit(detail::perturb(p, first, last, -half));
  } catch (const std::invalid_argument&) {
    return detail::inconclusive(axiom, "step leaves the residue domain");
  }
  Rat finite_diff = (plus - minus) / step;
  PoissonTrialStats hat = poisson_binomial(p, std::make_pair(first, last));
  Rat rhs = (p.p(last) - p.p(first)) * hat.prob(p.k - 1);
  AuditVerdict v;
  v.axiom = axiom;
  v.values = {{"finite_diff", finite_diff}, {"formula", rhs}};
  v.outcome = rat_abs(finite_diff - rhs) <= tolerance ? Outcome::satisfied
                                                      : Outcome::violated;
  return v;
}

// P[|B-hat| = k-1] >= (1-2s) / (p_1 (1-p_n)), for the labeling where the
// growing coalition is [k] and the perturbed parties are 1 and n.
inline AuditVerdict verify_probability_bound(const ResidueProfile& p) {
  const std::string axiom = "probability-bound";
  if (p.n() < 2 || p.k < 1) return detail::inconclusive(axiom, "need n >= 2, k >= 1");
  if (p.p(1) <= 0) return detail::inconclusive(axiom, "bound requires p_1 > 0");
  Subset front = 0;
  for (int i = 1; i <= p.k; ++i) front |= Subset(1) << (i - 1);
  Rat s = p.deficit(front);
  PoissonTrialStats hat = poisson_binomial(p, std::make_pair(1, p.n()));
  Rat lhs = hat.prob(p.k - 1);
  Rat rhs = (1 - 2 * s) / (p.p(1) * (1 - p.p(p.n())));
  AuditVerdict v;
  v.axiom = axiom;
  v.values = {{"P[|Bhat|=k-1]", lhs}, {"bound", rhs}};
  v.outcome = lhs >= rhs ? Outcome::satisfied : Outcome::violated;
  return v;
}

// Central finite difference of P[S = [k]] under Sampford rounding along
// +e_grow - e_shrink; selection monotonicity predicts a nonnegative value.
inline Rat sampford_directional_derivative(const ResidueProfile& p, int grow,
                                           int shrink,
                                           const Rat& step = Rat(1, 10000)) {
  if (grow < 1 || grow > p.k || shrink <= p.k || shrink > p.n())
    throw std::invalid_argument("grow must lie in [k], shrink outside [k]");
  if (p.p(grow) <= 0) throw std::invalid_argument("p_grow must be positive");
  Subset front = 0;
  for (int i = 1; i <= p.k; ++i) front |= Subset(1) << (i - 1);
  Rat half = step / 2;
  Rat plus = sampford_distribution(detail::perturb(p, grow, shrink, half)).prob(front);
  Rat minus = sampford_distribution(detail::perturb(p, grow, shrink, -half)).prob(front);
  return (plus - minus) / step;
}

// --- two-coalition shift witness (systematic rounding, |T| = 2) ------------

// Gap lengths a..e between the two growing intervals; the offset u0 keeps
// both old intervals inside their grown counterparts.
struct ShiftWitness {
  Rat a, b, c, d, e;
  Rat u0;
};

inline ShiftWitness construct_shift(const Rat& a, const Rat& b, const Rat& c,
                                    const Rat& d, const Rat& e) {
  if (a > 0 || c > 0 || e > 0 || b < 0 || d < 0 || a + b + c + d + e != 0)
    throw std::invalid_argument("need a,c,e <= 0 <= b,d and zero total");
  Rat u0 = b <= -c ? Rat(-a) : Rat(-a - b - c);
  ShiftWitness w{a, b, c, d, e, u0};
  if (u0 + a > 0 || u0 + a + b < 0 || u0 + a + b + c > 0 || u0 + a + b + c + d < 0)
    throw std::logic_error("shift witness failed its inequalities");
  return w;
}

}  // namespace apportion
