#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "apportion/pipage.hpp"
#include "apportion/profile.hpp"
#include "apportion/systematic.hpp"

namespace apportion {

inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

// Dyadic u in [0,1) with 53 random bits, exact as a rational.
inline Rat uniform01_rat(std::mt19937_64& rng) {
  return Rat(BigInt(rng() >> 11), BigInt(1) << 53);
}

inline int draw_weighted(std::mt19937_64& rng, const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  double x = uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    x -= weights[i];
    if (x < 0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

inline std::vector<int> shuffled_order(int n, std::mt19937_64& rng) {
  std::vector<int> order = numeric_order(n);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

// Rejective Sampford procedure: one draw proportional to p_i, then k-1 draws
// with replacement proportional to p_i/(1-p_i); restart on collision.
inline Subset sampford_sample(const ResidueProfile& p, std::uint64_t seed,
                              std::uint64_t max_restarts = 1000000) {
  if (p.k == 0) return 0;
  if (p.k >= p.n())
    throw std::invalid_argument("sampford_sample requires 1 <= k <= n-1");
  std::mt19937_64 rng(seed);
  std::vector<double> first(p.n()), odds(p.n());
  for (int i = 1; i <= p.n(); ++i) {
    double pi = float_from_rational(p.p(i)).convert_to<double>();
    first[i - 1] = pi;
    odds[i - 1] = pi / (1 - pi);
  }
  for (std::uint64_t attempt = 0; attempt <= max_restarts; ++attempt) {
    Subset s = Subset(1) << draw_weighted(rng, first);
    bool collision = false;
    for (int d = 1; d < p.k && !collision; ++d) {
      Subset bit = Subset(1) << draw_weighted(rng, odds);
      if (s & bit)
        collision = true;
      else
        s |= bit;
    }
    if (!collision) return s;
  }
  throw std::runtime_error("sampford_sample exceeded max_restarts");
}

// Independent Bernoulli inclusion per party; variable-size output. A
// simulation cross-check, not a rounding rule.
inline Subset poisson_sample(const ResidueProfile& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Subset s = 0;
  for (int i = 1; i <= p.n(); ++i) {
    double pi = float_from_rational(p.p(i)).convert_to<double>();
    if (uniform01(rng) < pi) s |= Subset(1) << (i - 1);
  }
  return s;
}

inline Subset systematic_sample(const ResidueProfile& p, std::uint64_t seed,
                                std::vector<int> order = {}, bool random_order = false) {
  std::mt19937_64 rng(seed);
  if (random_order)
    order = shuffled_order(p.n(), rng);
  else if (order.empty())
    order = numeric_order(p.n());
  return systematic_select(p, {std::move(order), uniform01_rat(rng), Rat(0)});
}

inline Subset pipage_sample(const ResidueProfile& p, std::uint64_t seed,
                            std::vector<int> order = {}, bool random_order = false) {
  std::mt19937_64 rng(seed);
  if (random_order)
    order = shuffled_order(p.n(), rng);
  else if (order.empty())
    order = numeric_order(p.n());
  check_order(order, p.n());

  std::vector<Rat> values = p.residues;
  for (;;) {
    int i = 0, j = 0;
    for (int party : order) {
      const Rat& v = values[party - 1];
      if (v > 0 && v < 1) {
        if (i == 0)
          i = party;
        else {
          j = party;
          break;
        }
      }
    }
    if (j == 0) break;
    Rat pi = values[i - 1], pj = values[j - 1], sum = pi + pj;
    Rat branch_prob = sum <= 1 ? Rat(pi / sum) : Rat((1 - pj) / (2 - sum));
    bool take_first = uniform01(rng) < float_from_rational(branch_prob).convert_to<double>();
    if (sum <= 1) {
      values[i - 1] = take_first ? sum : Rat(0);
      values[j - 1] = take_first ? Rat(0) : sum;
    } else {
      values[i - 1] = take_first ? Rat(1) : sum - 1;
      values[j - 1] = take_first ? sum - 1 : Rat(1);
    }
  }
  Subset s = 0;
  for (std::size_t idx = 0; idx < values.size(); ++idx)
    if (values[idx] == 1) s |= Subset(1) << idx;
  return s;
}

}  // namespace apportion
