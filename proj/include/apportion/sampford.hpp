#pragma once

#include <vector>

#include "apportion/distribution.hpp"
#include "apportion/profile.hpp"

namespace apportion {

// f(A) = sum_{i in A} (1 - p_i) * prod_{j in A} p_j * prod_{j notin A} (1 - p_j).
inline Rat sampford_f(Subset a, const ResidueProfile& p) {
  Rat coeff = 0;
  Rat prod = 1;
  for (int i = 1; i <= p.n(); ++i) {
    if (subset_contains(a, i)) {
      coeff += 1 - p.p(i);
      prod *= p.p(i);
    } else {
      prod *= 1 - p.p(i);
    }
  }
  return coeff * prod;
}

// Exact Sampford distribution, mass(A) = f(A) / sum_{A'} f(A').
// Computed through the equivalent form f(A) = C * (sum_{i in A} (1-p_i)) *
// prod_{i in A} p_i/(1-p_i) with the common factor C = prod_j (1-p_j)
// cancelling in the normalization.
inline KSubsetDistribution sampford_distribution(const ResidueProfile& p) {
  KSubsetDistribution dist;
  dist.n = p.n();
  dist.k = p.k;
  if (p.k == 0) {
    dist.add(0, Rat(1));
    return dist;
  }
  std::vector<Rat> odds(p.n());
  for (int i = 1; i <= p.n(); ++i) odds[i - 1] = p.p(i) / (1 - p.p(i));
  Rat total = 0;
  for (Subset a : enumerate_k_subsets(p.n(), p.k)) {
    Rat coeff = 0;
    Rat prod = 1;
    for (int i : subset_members(a)) {
      coeff += 1 - p.p(i);
      prod *= odds[i - 1];
    }
    Rat w = coeff * prod;
    if (w != 0) {
      dist.mass[a] = w;
      total += w;
    }
  }
  if (total == 0) throw std::invalid_argument("degenerate profile for Sampford rounding");
  dist.scale(1 / total);
  return dist;
}

// Same distribution from the rejective-procedure form,
// mass(A) ~ sum_{i in A} p_i * prod_{j in A \ i} p_j/(1-p_j).
// Kept as a second algebraic route; rules tests assert both forms agree.
inline KSubsetDistribution sampford_distribution_odds_form(const ResidueProfile& p) {
  KSubsetDistribution dist;
  dist.n = p.n();
  dist.k = p.k;
  if (p.k == 0) {
    dist.add(0, Rat(1));
    return dist;
  }
  Rat total = 0;
  for (Subset a : enumerate_k_subsets(p.n(), p.k)) {
    Rat w = 0;
    for (int i : subset_members(a)) {
      Rat term = p.p(i);
      for (int j : subset_members(a))
        if (j != i) term *= p.p(j) / (1 - p.p(j));
      w += term;
    }
    if (w != 0) {
      dist.mass[a] = w;
      total += w;
    }
  }
  if (total == 0) throw std::invalid_argument("degenerate profile for Sampford rounding");
  dist.scale(1 / total);
  return dist;
}

}  // namespace apportion
