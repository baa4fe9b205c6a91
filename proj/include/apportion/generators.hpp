#pragma once

#include <random>

#include "apportion/profile.hpp"

namespace apportion {

// Random rational residue profile with sum exactly k and all entries in
// (0,1). Profiles with k > n/2 are generated through the complement so the
// rejection rate stays negligible.
inline ResidueProfile random_residue_profile(int n, int k, std::mt19937_64& rng) {
  if (k < 1 || k > n - 1) throw std::invalid_argument("need 1 <= k <= n-1");
  bool complement = 2 * k > n;
  int kk = complement ? n - k : k;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Rat> p(n);
    Rat sum = 0;
    for (int i = 0; i < n; ++i) {
      p[i] = Rat(1 + static_cast<long>(rng() % 999), 1000);
      sum += p[i];
    }
    Rat scale = Rat(kk) / sum;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      p[i] *= scale;
      if (p[i] >= 1 || p[i] <= 0) ok = false;
    }
    if (!ok) continue;
    if (complement)
      for (int i = 0; i < n; ++i) p[i] = 1 - p[i];
    return validate_residues(std::move(p), Rat(0));
  }
  throw std::runtime_error("random_residue_profile failed to generate");
}

inline Subset random_k_subset(int n, int k, std::mt19937_64& rng) {
  Subset s = 0;
  while (subset_size(s) < k) s |= Subset(1) << (rng() % n);
  return s;
}

// Monotone shift toward T: residues in T weakly grow, residues outside T
// weakly shrink, sum preserved. Transfer amounts are random but capped so
// every entry stays inside [0,1).
inline ResidueProfile random_monotone_residue_shift(const ResidueProfile& p, Subset t,
                                                    std::mt19937_64& rng) {
  std::vector<Rat> values = p.residues;
  Rat headroom = 0, stock = 0;
  for (int i = 1; i <= p.n(); ++i) {
    if (subset_contains(t, i))
      headroom += 1 - p.p(i);
    else
      stock += p.p(i);
  }
  Rat budget = std::min(headroom, stock) * Rat(1 + static_cast<long>(rng() % 999), 1000);
  // spread the budget with random weights, clipping at the caps
  Rat remaining = budget;
  for (int i = 1; i <= p.n() && remaining > 0; ++i) {
    if (!subset_contains(t, i)) continue;
    Rat cap = (1 - values[i - 1]) * Rat(999, 1000);
    Rat amount = std::min(cap, remaining * Rat(1 + static_cast<long>(rng() % 1000), 1000));
    values[i - 1] += amount;
    remaining -= amount;
  }
  Rat granted = budget - remaining;
  remaining = granted;
  for (int i = 1; i <= p.n() && remaining > 0; ++i) {
    if (subset_contains(t, i)) continue;
    Rat amount = std::min(values[i - 1], remaining * Rat(1 + static_cast<long>(rng() % 1000), 1000));
    values[i - 1] -= amount;
    remaining -= amount;
  }
  // settle whatever the random weights left over, scanning in order
  for (int i = 1; i <= p.n() && remaining > 0; ++i) {
    if (subset_contains(t, i)) continue;
    Rat amount = std::min(values[i - 1], remaining);
    values[i - 1] -= amount;
    remaining -= amount;
  }
  if (remaining > 0) {
    // give the unplaceable rest back to T, scanning in order
    for (int i = 1; i <= p.n() && remaining > 0; ++i) {
      if (!subset_contains(t, i)) continue;
      Rat take = std::min(remaining, Rat(values[i - 1] - p.p(i)));
      values[i - 1] -= take;
      remaining -= take;
    }
  }
  return validate_residues(std::move(values), Rat(0));
}

// Random vote profile whose standard quotas are the votes themselves
// (votes summing to h), so quota shifts can be steered exactly.
inline VoteProfile random_quota_profile(int n, int h, std::mt19937_64& rng) {
  std::vector<Rat> w(n);
  Rat sum = 0;
  for (int i = 0; i < n; ++i) {
    w[i] = Rat(1 + static_cast<long>(rng() % 9999), 1);
    sum += w[i];
  }
  for (int i = 0; i < n; ++i) w[i] = w[i] * Rat(h) / sum;
  return VoteProfile{std::move(w), h};
}

// Monotone quota shift toward T, possibly crossing lower-quota boundaries.
inline VoteProfile random_monotone_quota_shift(const VoteProfile& v, Subset t,
                                               std::mt19937_64& rng) {
  std::vector<Rat> q = v.votes;  // quotas, since votes sum to h
  Rat stock = 0;
  for (int i = 1; i <= v.n(); ++i)
    if (!subset_contains(t, i)) stock += q[i - 1];
  Rat budget = stock * Rat(static_cast<long>(rng() % 1000), 1000);
  Rat remaining = budget;
  for (int i = 1; i <= v.n() && remaining > 0; ++i) {
    if (subset_contains(t, i)) continue;
    Rat amount = std::min(q[i - 1], remaining * Rat(1 + static_cast<long>(rng() % 1000), 1000));
    q[i - 1] -= amount;
    remaining -= amount;
  }
  Rat granted = budget - remaining;
  // hand the collected quota to T with random weights
  int members = subset_size(t);
  std::vector<Rat> weights(members);
  Rat wsum = 0;
  for (int j = 0; j < members; ++j) {
    weights[j] = Rat(1 + static_cast<long>(rng() % 999), 1);
    wsum += weights[j];
  }
  int j = 0;
  for (int i = 1; i <= v.n(); ++i)
    if (subset_contains(t, i)) q[i - 1] += granted * weights[j++] / wsum;
  return VoteProfile{std::move(q), v.house_size};
}

}  // namespace apportion
