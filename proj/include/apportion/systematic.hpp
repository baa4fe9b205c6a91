#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "apportion/distribution.hpp"
#include "apportion/profile.hpp"

namespace apportion {

// One realization of systematic rounding: line up intervals of lengths
// p_{order[0]}, p_{order[1]}, ... starting at `offset`, shift by u, and
// select the parties whose interval contains an integer.
struct SystematicDraw {
  std::vector<int> order;  // permutation of parties, 1-indexed
  Rat shift;               // u in [0,1)
  Rat offset = 0;          // u0, arbitrary real starting point for the stack
};

inline std::vector<int> numeric_order(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  return order;
}

inline void check_order(const std::vector<int>& order, int n) {
  std::vector<bool> seen(n, false);
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("order must be a permutation of [n]");
  for (int p : order) {
    if (p < 1 || p > n || seen[p - 1])
      throw std::invalid_argument("order must be a permutation of [n]");
    seen[p - 1] = true;
  }
}

inline Rat rat_frac(const Rat& x) { return x - Rat(rat_floor(x), 1); }

// Selected set for a fixed shift u. The half-open interval
// [u + c_{i-1}, u + c_i) contains an integer iff floor(u+c_i) >= ceil(u+c_{i-1}).
inline Subset systematic_select(const ResidueProfile& p, const SystematicDraw& draw) {
  check_order(draw.order, p.n());
  Subset selected = 0;
  Rat left = draw.shift + draw.offset;
  for (int party : draw.order) {
    Rat right = left + p.p(party);
    if (rat_floor(right) >= rat_ceil(left) && left != right)
      selected |= Subset(1) << (party - 1);
    left = right;
  }
  return selected;
}

// Exact distribution by breakpoint sweep: the selected set is constant
// between consecutive values of u at which some interval endpoint crosses an
// integer, and the probability of a set is the total length of its cells.
inline KSubsetDistribution systematic_distribution(const ResidueProfile& p,
                                                   std::vector<int> order = {},
                                                   const Rat& offset = Rat(0)) {
  if (order.empty()) order = numeric_order(p.n());
  check_order(order, p.n());

  std::vector<Rat> breakpoints{Rat(0), Rat(1)};
  Rat c = offset;
  breakpoints.push_back(rat_frac(-c));
  for (int party : order) {
    c += p.p(party);
    breakpoints.push_back(rat_frac(-c));
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  KSubsetDistribution dist;
  dist.n = p.n();
  dist.k = p.k;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Rat length = breakpoints[i + 1] - breakpoints[i];
    if (length == 0) continue;
    Rat mid = (breakpoints[i] + breakpoints[i + 1]) / 2;
    Subset s = systematic_select(p, {order, mid, offset});
    dist.add(s, length);
  }
  return dist;
}

constexpr int kMaxExactRandomOrderSystematic = 10;

// Uniform average over all n! orders. Exact, so capped at small n; larger
// instances should go through the Monte Carlo sampler instead.
inline KSubsetDistribution systematic_random_order_distribution(const ResidueProfile& p) {
  if (p.n() > kMaxExactRandomOrderSystematic)
    throw std::invalid_argument(
        "n too large for exact order averaging; use the seeded sampler");
  std::vector<int> order = numeric_order(p.n());
  KSubsetDistribution dist;
  dist.n = p.n();
  dist.k = p.k;
  std::uint64_t count = 0;
  do {
    KSubsetDistribution one = systematic_distribution(p, order);
    for (const auto& [s, m] : one.mass) dist.add(s, m);
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  dist.scale(Rat(1, count));
  return dist;
}

}  // namespace apportion
