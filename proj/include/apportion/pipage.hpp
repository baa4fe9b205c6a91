#pragma once

#include <algorithm>
#include <vector>

#include "apportion/distribution.hpp"
#include "apportion/profile.hpp"
#include "apportion/systematic.hpp"

namespace apportion {

namespace detail {

inline void pipage_recurse(std::vector<Rat>& values, const std::vector<int>& order,
                           const Rat& path_prob, KSubsetDistribution& dist) {
  // first two parties (in `order`) still strictly fractional
  int i = 0, j = 0;
  for (int party : order) {
    const Rat& v = values[party - 1];
    if (v > 0 && v < 1) {
      if (i == 0) {
        i = party;
      } else {
        j = party;
        break;
      }
    }
  }
  if (j == 0) {
    Subset s = 0;
    for (std::size_t idx = 0; idx < values.size(); ++idx)
      if (values[idx] == 1) s |= Subset(1) << idx;
    dist.add(s, path_prob);
    return;
  }

  Rat pi = values[i - 1], pj = values[j - 1];
  Rat sum = pi + pj;
  auto branch = [&](const Rat& vi, const Rat& vj, const Rat& prob) {
    if (prob == 0) return;
    values[i - 1] = vi;
    values[j - 1] = vj;
    pipage_recurse(values, order, path_prob * prob, dist);
  };
  if (sum <= 1) {
    branch(sum, Rat(0), pi / sum);
    branch(Rat(0), sum, pj / sum);
  } else {
    branch(Rat(1), sum - 1, (1 - pj) / (2 - sum));
    branch(sum - 1, Rat(1), (1 - pi) / (2 - sum));
  }
  values[i - 1] = pi;
  values[j - 1] = pj;
}

}  // namespace detail

// Exact pipage (pivotal) distribution for a fixed order: repeatedly pair the
// first two fractional parties and branch on the two updates.
inline KSubsetDistribution pipage_distribution(const ResidueProfile& p,
                                               std::vector<int> order = {}) {
  if (order.empty()) order = numeric_order(p.n());
  check_order(order, p.n());
  KSubsetDistribution dist;
  dist.n = p.n();
  dist.k = p.k;
  std::vector<Rat> values = p.residues;
  detail::pipage_recurse(values, order, Rat(1), dist);
  return dist;
}

constexpr int kMaxExactRandomOrderPipage = 8;

inline KSubsetDistribution pipage_random_order_distribution(const ResidueProfile& p) {
  if (p.n() > kMaxExactRandomOrderPipage)
    throw std::invalid_argument(
        "n too large for exact order averaging; use the seeded sampler");
  std::vector<int> order = numeric_order(p.n());
  KSubsetDistribution dist;
  dist.n = p.n();
  dist.k = p.k;
  std::uint64_t count = 0;
  do {
    KSubsetDistribution one = pipage_distribution(p, order);
    for (const auto& [s, m] : one.mass) dist.add(s, m);
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  dist.scale(Rat(1, count));
  return dist;
}

}  // namespace apportion
