#pragma once

#include <map>
#include <optional>
#include <vector>

#include "apportion/rule.hpp"

namespace apportion {

using SeatVector = std::vector<int>;

// Probability mass over seat vectors summing to h; every support point is
// lower quota + 0/1 per party.
struct SeatDistribution {
  int n = 0;
  int h = 0;
  std::map<SeatVector, Rat> mass;
  QuotaBreakdown quota;

  Rat prob(const SeatVector& seats) const {
    auto it = mass.find(seats);
    return it == mass.end() ? Rat(0) : it->second;
  }

  std::vector<Rat> expected_seats() const {
    std::vector<Rat> out(n, Rat(0));
    for (const auto& [seats, m] : mass)
      for (int i = 0; i < n; ++i) out[i] += Rat(seats[i]) * m;
    return out;
  }

  // pmf of the coalition's total seat count
  std::map<int, Rat> coalition_seat_pmf(Subset coalition) const {
    std::map<int, Rat> pmf;
    for (const auto& [seats, m] : mass) {
      int total = 0;
      for (int i : subset_members(coalition)) total += seats[i - 1];
      pmf[total] += m;
    }
    return pmf;
  }
};

struct CoalitionQuery {
  Subset coalition = 0;
  int threshold = 0;
};

inline SeatDistribution induce_apportionment(Rule rule, const VoteProfile& votes,
                                             const RuleOptions& opts = {}) {
  QuotaBreakdown quota = compute_quotas(votes);
  KSubsetDistribution rounded = rule_distribution(rule, quota.residues, opts);
  SeatDistribution out;
  out.n = votes.n();
  out.h = votes.house_size;
  out.quota = quota;
  for (const auto& [s, m] : rounded.mass) {
    SeatVector seats(out.n);
    for (int i = 0; i < out.n; ++i)
      seats[i] = static_cast<int>(quota.lower_quotas[i]) +
                 (subset_contains(s, i + 1) ? 1 : 0);
    out.mass[seats] += m;
  }
  return out;
}

inline Rat coalition_threshold_prob(const SeatDistribution& dist,
                                    const CoalitionQuery& query) {
  if (query.threshold <= 0) return Rat(1);
  Rat total = 0;
  for (const auto& [count, m] : dist.coalition_seat_pmf(query.coalition))
    if (count >= query.threshold) total += m;
  return total;
}

struct DominanceVerdict {
  bool dominates = false;
  std::optional<int> violating_theta;  // first theta where the tail drops
  Rat tail_old;
  Rat tail_new;
};

// First-order stochastic dominance of the coalition seat count under
// `dist_new` over `dist_old`: tail probability at every threshold 0..h must
// not drop (beyond `slack`).
inline DominanceVerdict dominance_compare(const SeatDistribution& dist_old,
                                          const SeatDistribution& dist_new,
                                          Subset coalition, const Rat& slack = Rat(0)) {
  if (dist_old.h != dist_new.h || dist_old.n != dist_new.n)
    throw std::invalid_argument("dominance_compare: mismatched n or h");
  auto pmf_old = dist_old.coalition_seat_pmf(coalition);
  auto pmf_new = dist_new.coalition_seat_pmf(coalition);
  auto tail = [](const std::map<int, Rat>& pmf, int theta) {
    Rat t = 0;
    for (const auto& [count, m] : pmf)
      if (count >= theta) t += m;
    return t;
  };
  for (int theta = 0; theta <= dist_old.h; ++theta) {
    Rat told = tail(pmf_old, theta);
    Rat tnew = tail(pmf_new, theta);
    if (tnew < told - slack)
      return {false, theta, told, tnew};
  }
  return {true, std::nullopt, Rat(0), Rat(0)};
}

}  // namespace apportion
