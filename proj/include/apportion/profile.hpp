#pragma once

#include <stdexcept>
#include <vector>

#include "apportion/rational.hpp"
#include "apportion/subset.hpp"

namespace apportion {

// Target probabilities p_1..p_n in [0,1) summing to an integer k.
// Parties are 1-indexed in every interface.
struct ResidueProfile {
  std::vector<Rat> residues;
  int k = 0;

  int n() const { return static_cast<int>(residues.size()); }
  const Rat& p(int party) const { return residues[party - 1]; }

  // s = sum_{i in T} (1 - p_i); with T = the k growing parties this is the
  // deficit driving the Sampford derivative bounds.
  Rat deficit(Subset t) const {
    Rat s = 0;
    for (int i : subset_members(t)) s += 1 - p(i);
    return s;
  }
};

// Verifies the profile invariants. A non-integral sum within `repair_tol`
// (input noise, e.g. decimal residues that were rounded upstream) is absorbed
// by proportional renormalization; anything larger is an error.
inline ResidueProfile validate_residues(std::vector<Rat> raw,
                                        const Rat& repair_tol = Rat(1, 1000000000)) {
  if (raw.empty()) throw std::invalid_argument("residue profile must be nonempty");
  if (static_cast<int>(raw.size()) > kMaxParties)
    throw std::invalid_argument("too many parties");
  Rat sum = 0;
  for (const Rat& p : raw) {
    if (p < 0 || p >= 1)
      throw std::invalid_argument("residue outside [0,1): " + rat_to_string(p));
    sum += p;
  }
  if (!is_integer(sum)) {
    BigInt nearest = rat_floor(sum + Rat(1, 2));
    if (rat_abs(sum - Rat(nearest, 1)) > repair_tol)
      throw std::invalid_argument("residues sum to non-integer " + rat_to_string(sum));
    if (nearest > 0 && sum > 0) {
      Rat scale = Rat(nearest, 1) / sum;
      for (Rat& p : raw) p *= scale;
      sum = Rat(nearest, 1);
    } else {
      throw std::invalid_argument("residues sum to non-integer " + rat_to_string(sum));
    }
  }
  ResidueProfile out;
  out.k = static_cast<int>(rat_floor(sum));
  if (out.k < 0 || out.k > static_cast<int>(raw.size()))
    throw std::invalid_argument("residue sum k out of range");
  out.residues = std::move(raw);
  return out;
}

struct VoteProfile {
  std::vector<Rat> votes;
  int house_size = 0;

  int n() const { return static_cast<int>(votes.size()); }
};

struct QuotaBreakdown {
  std::vector<Rat> quotas;        // q_i = h v_i / sum v
  std::vector<BigInt> lower_quotas;  // floor(q_i)
  ResidueProfile residues;        // q_i - floor(q_i), summing to k
  int k = 0;
};

inline QuotaBreakdown compute_quotas(const VoteProfile& votes) {
  if (votes.n() == 0) throw std::invalid_argument("no parties");
  if (votes.n() > kMaxParties) throw std::invalid_argument("too many parties");
  if (votes.house_size <= 0) throw std::invalid_argument("house size must be positive");
  Rat total = 0;
  for (const Rat& v : votes.votes) {
    if (v < 0) throw std::invalid_argument("negative vote count");
    total += v;
  }
  if (total == 0) throw std::invalid_argument("all-zero vote vector");
  QuotaBreakdown out;
  std::vector<Rat> residues;
  for (const Rat& v : votes.votes) {
    Rat q = Rat(votes.house_size) * v / total;
    BigInt lo = rat_floor(q);
    out.quotas.push_back(q);
    out.lower_quotas.push_back(lo);
    residues.push_back(q - Rat(lo, 1));
  }
  out.residues = validate_residues(std::move(residues), Rat(0));
  out.k = out.residues.k;
  return out;
}

}  // namespace apportion
