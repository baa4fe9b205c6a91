#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "apportion/rational.hpp"
#include "apportion/subset.hpp"

namespace apportion {

// Exact probability mass over size-k subsets of [n]. The map key order is
// colexicographic, so iteration is the canonical order for golden files.
struct KSubsetDistribution {
  int n = 0;
  int k = 0;
  std::map<Subset, Rat> mass;

  Rat prob(Subset s) const {
    auto it = mass.find(s);
    return it == mass.end() ? Rat(0) : it->second;
  }

  Rat total_mass() const {
    Rat t = 0;
    for (const auto& [s, m] : mass) t += m;
    return t;
  }

  // Inclusion marginal of one party.
  Rat marginal(int party) const {
    Rat t = 0;
    for (const auto& [s, m] : mass)
      if (subset_contains(s, party)) t += m;
    return t;
  }

  std::vector<Rat> marginals() const {
    std::vector<Rat> out(n, Rat(0));
    for (const auto& [s, m] : mass)
      for (int i : subset_members(s)) out[i - 1] += m;
    return out;
  }

  // P[S contains all of t].
  Rat superset_prob(Subset t) const {
    Rat total = 0;
    for (const auto& [s, m] : mass)
      if ((s & t) == t) total += m;
    return total;
  }

  void add(Subset s, const Rat& m) {
    if (m == 0) return;
    if (m < 0) throw std::logic_error("negative probability mass");
    if (subset_size(s) != k) throw std::logic_error("subset size != k");
    mass[s] += m;
  }

  void scale(const Rat& factor) {
    for (auto& [s, m] : mass) m *= factor;
  }
};

}  // namespace apportion
