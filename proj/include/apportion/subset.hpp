#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace apportion {

// A subset of parties 1..n as a bitmask; bit i-1 stands for party i.
// Numeric order of masks is exactly colexicographic order of subsets,
// which is the canonical enumeration order everywhere in this library.
using Subset = std::uint32_t;

constexpr int kMaxParties = 30;

inline int subset_size(Subset s) { return std::popcount(s); }

inline bool subset_contains(Subset s, int party) {
  return (s >> (party - 1)) & 1u;
}

inline Subset subset_of(std::initializer_list<int> parties) {
  Subset s = 0;
  for (int p : parties) s |= Subset(1) << (p - 1);
  return s;
}

inline Subset subset_of(const std::vector<int>& parties) {
  Subset s = 0;
  for (int p : parties) s |= Subset(1) << (p - 1);
  return s;
}

inline std::vector<int> subset_members(Subset s) {
  std::vector<int> out;
  for (int i = 1; s != 0; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

inline std::string subset_to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int p : subset_members(s)) {
    if (!first) out += ",";
    out += std::to_string(p);
    first = false;
  }
  return out + "}";
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// All size-k subsets of [n] in colexicographic order (Gosper's hack).
inline std::vector<Subset> enumerate_k_subsets(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > kMaxParties)
    throw std::invalid_argument("enumerate_k_subsets: need 0 <= k <= n <= 30");
  std::vector<Subset> out;
  out.reserve(binomial(n, k));
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  Subset s = (Subset(1) << k) - 1;
  const Subset limit = Subset(1) << n;
  while (s < limit) {
    out.push_back(s);
    Subset c = s & -s;
    Subset r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

}  // namespace apportion
