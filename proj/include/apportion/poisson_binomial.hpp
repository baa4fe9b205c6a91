#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "apportion/profile.hpp"

namespace apportion {

// Distribution of |B| where B contains each party i independently with
// probability p_i. `excluded` drops two named parties before the recurrence
// (the B-hat variant, where parties 1 and n are omitted).
struct PoissonTrialStats {
  std::vector<Rat> pmf;  // pmf[l] = P[|B| = l]
  std::optional<std::pair<int, int>> excluded;

  Rat prob(int l) const {
    if (l < 0 || l >= static_cast<int>(pmf.size())) return Rat(0);
    return pmf[l];
  }
};

inline PoissonTrialStats poisson_binomial(
    const ResidueProfile& profile,
    std::optional<std::pair<int, int>> exclude = std::nullopt) {
  if (exclude) {
    auto [a, b] = *exclude;
    if (a == b || a < 1 || b < 1 || a > profile.n() || b > profile.n())
      throw std::invalid_argument("excluded indices must be distinct and in range");
  }
  PoissonTrialStats out;
  out.excluded = exclude;
  out.pmf.assign(1, Rat(1));
  for (int i = 1; i <= profile.n(); ++i) {
    if (exclude && (i == exclude->first || i == exclude->second)) continue;
    const Rat& p = profile.p(i);
    std::vector<Rat> next(out.pmf.size() + 1, Rat(0));
    for (std::size_t l = 0; l < out.pmf.size(); ++l) {
      next[l] += out.pmf[l] * (1 - p);
      next[l + 1] += out.pmf[l] * p;
    }
    out.pmf = std::move(next);
  }
  return out;
}

// E[1{|B| < k} (k - |B|)], which also equals (1/2) E[ | |B| - k | ].
inline Rat truncated_deficit(const ResidueProfile& profile) {
  PoissonTrialStats stats = poisson_binomial(profile);
  Rat total = 0;
  for (int l = 0; l < profile.k; ++l)
    total += Rat(profile.k - l) * stats.prob(l);
  return total;
}

}  // namespace apportion
