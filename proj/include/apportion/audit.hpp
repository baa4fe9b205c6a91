#pragma once

#include <map>
#include <optional>
#include <string>

#include "apportion/seats.hpp"

namespace apportion {

enum class Outcome { satisfied, violated, inconclusive };

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::satisfied: return "SATISFIED";
    case Outcome::violated: return "VIOLATED";
    case Outcome::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

// Result of one axiom check. A VIOLATED verdict carries enough numbers in
// `values` to recompute the violation from scratch.
struct AuditVerdict {
  std::string axiom;
  Outcome outcome = Outcome::inconclusive;
  std::string witness;
  std::map<std::string, Rat> values;
  std::optional<int> theta;

  bool satisfied() const { return outcome == Outcome::satisfied; }
  bool violated() const { return outcome == Outcome::violated; }
};

namespace detail {

inline AuditVerdict inconclusive(std::string axiom, std::string why) {
  return {std::move(axiom), Outcome::inconclusive, std::move(why), {}, std::nullopt};
}

}  // namespace detail

// --- rounding-rule axioms -------------------------------------------------

inline AuditVerdict check_selection_monotonicity(Rule rule, const ResidueProfile& p,
                                                 const ResidueProfile& p_new, Subset t,
                                                 const RuleOptions& opts = {}) {
  const std::string axiom = "selection-monotonicity";
  if (p.n() != p_new.n() || p.k != p_new.k)
    return detail::inconclusive(axiom, "profiles disagree on n or k");
  if (subset_size(t) != p.k)
    return detail::inconclusive(axiom, "|T| must equal k");
  for (int i = 1; i <= p.n(); ++i) {
    bool in_t = subset_contains(t, i);
    if (in_t && p_new.p(i) < p.p(i))
      return detail::inconclusive(axiom, "residue in T decreased");
    if (!in_t && p_new.p(i) > p.p(i))
      return detail::inconclusive(axiom, "residue outside T increased");
  }
  Rat slack = rule_slack(rule, opts);
  Rat before = rule_distribution(rule, p, opts).prob(t);
  Rat after = rule_distribution(rule, p_new, opts).prob(t);
  AuditVerdict v;
  v.axiom = axiom;
  v.witness = "T=" + subset_to_string(t);
  v.values = {{"P_old[S=T]", before}, {"P_new[S=T]", after}};
  v.outcome = after >= before - slack ? Outcome::satisfied : Outcome::violated;
  return v;
}

inline AuditVerdict check_pairwise_selection(Rule rule, const ResidueProfile& p,
                                             const ResidueProfile& p_new, Subset t1,
                                             Subset t2, const RuleOptions& opts = {}) {
  const std::string axiom = "pairwise-selection-monotonicity";
  if (p.n() != p_new.n() || p.k != p_new.k)
    return detail::inconclusive(axiom, "profiles disagree on n or k");
  if (subset_size(t1) != p.k || subset_size(t2) != p.k)
    return detail::inconclusive(axiom, "|T1| and |T2| must equal k");
  for (int i = 1; i <= p.n(); ++i) {
    if (subset_contains(t1, i) && p_new.p(i) < p.p(i))
      return detail::inconclusive(axiom, "residue in T1 decreased");
    if (subset_contains(t2, i) && p_new.p(i) > p.p(i))
      return detail::inconclusive(axiom, "residue in T2 increased");
  }
  Rat slack = rule_slack(rule, opts);
  KSubsetDistribution before = rule_distribution(rule, p, opts);
  KSubsetDistribution after = rule_distribution(rule, p_new, opts);
  Rat t1_old = before.prob(t1), t1_new = after.prob(t1);
  Rat t2_old = before.prob(t2), t2_new = after.prob(t2);
  AuditVerdict v;
  v.axiom = axiom;
  v.witness = "T1=" + subset_to_string(t1) + " T2=" + subset_to_string(t2);
  v.values = {{"P_old[S=T1]", t1_old},
              {"P_new[S=T1]", t1_new},
              {"P_old[S=T2]", t2_old},
              {"P_new[S=T2]", t2_new}};
  bool ok = t1_new >= t1_old - slack || t2_new <= t2_old + slack;
  v.outcome = ok ? Outcome::satisfied : Outcome::violated;
  return v;
}

inline AuditVerdict check_lipschitz(Rule rule, const ResidueProfile& p,
                                    const ResidueProfile& p_new, Subset t,
                                    const RuleOptions& opts = {}) {
  const std::string axiom = "lipschitz-continuity";
  if (p.n() != p_new.n() || p.k != p_new.k)
    return detail::inconclusive(axiom, "profiles disagree on n or k");
  if (subset_size(t) != p.k) return detail::inconclusive(axiom, "|T| must equal k");
  Rat l1 = 0;
  for (int i = 1; i <= p.n(); ++i) l1 += rat_abs(p_new.p(i) - p.p(i));
  Rat slack = rule_slack(rule, opts);
  Rat before = rule_distribution(rule, p, opts).prob(t);
  Rat after = rule_distribution(rule, p_new, opts).prob(t);
  Rat delta = rat_abs(after - before);
  AuditVerdict v;
  v.axiom = axiom;
  v.witness = "T=" + subset_to_string(t);
  v.values = {{"|dP|", delta}, {"l1", l1}};
  v.outcome = delta <= l1 + slack ? Outcome::satisfied : Outcome::violated;
  return v;
}

// --- apportionment axioms -------------------------------------------------

namespace detail {

inline bool quota_shift_ok(const QuotaBreakdown& q_old, const QuotaBreakdown& q_new,
                           Subset grow, Subset shrink, bool pairwise) {
  int n = static_cast<int>(q_old.quotas.size());
  for (int i = 1; i <= n; ++i) {
    bool in_grow = subset_contains(grow, i);
    bool in_shrink = subset_contains(shrink, i);
    const Rat& a = q_old.quotas[i - 1];
    const Rat& b = q_new.quotas[i - 1];
    if (in_grow && b < a) return false;
    if (in_shrink && b > a) return false;
    if (!pairwise && !in_grow && b > a) return false;  // single-T: rest must shrink
  }
  return true;
}

inline bool vote_shift_ok(const VoteProfile& v_old, const VoteProfile& v_new,
                          Subset grow, Subset shrink, bool pairwise) {
  for (int i = 1; i <= v_old.n(); ++i) {
    bool in_grow = subset_contains(grow, i);
    bool in_shrink = subset_contains(shrink, i);
    const Rat& a = v_old.votes[i - 1];
    const Rat& b = v_new.votes[i - 1];
    if (in_grow && b < a) return false;
    if (in_shrink && b > a) return false;
    if (!pairwise && !in_grow && b > a) return false;
  }
  return true;
}

inline AuditVerdict dominance_verdict(std::string axiom, std::string witness,
                                      const DominanceVerdict& d) {
  AuditVerdict v;
  v.axiom = std::move(axiom);
  v.witness = std::move(witness);
  if (d.dominates) {
    v.outcome = Outcome::satisfied;
  } else {
    v.outcome = Outcome::violated;
    v.theta = d.violating_theta;
    v.values = {{"tail_old", d.tail_old}, {"tail_new", d.tail_new}};
  }
  return v;
}

}  // namespace detail

inline AuditVerdict check_threshold_monotonicity(Rule rule, const VoteProfile& v_old,
                                                 const VoteProfile& v_new, Subset t,
                                                 const RuleOptions& opts = {}) {
  const std::string axiom = "threshold-monotonicity";
  if (v_old.n() != v_new.n() || v_old.house_size != v_new.house_size)
    return detail::inconclusive(axiom, "profiles disagree on n or h");
  QuotaBreakdown q_old = compute_quotas(v_old);
  QuotaBreakdown q_new = compute_quotas(v_new);
  if (!detail::quota_shift_ok(q_old, q_new, t, 0, false))
    return detail::inconclusive(axiom, "quota shift is not monotone toward T");
  SeatDistribution d_old = induce_apportionment(rule, v_old, opts);
  SeatDistribution d_new = induce_apportionment(rule, v_new, opts);
  DominanceVerdict d = dominance_compare(d_old, d_new, t, rule_slack(rule, opts));
  return detail::dominance_verdict(axiom, "T=" + subset_to_string(t), d);
}

inline AuditVerdict check_pairwise_threshold(Rule rule, const VoteProfile& v_old,
                                             const VoteProfile& v_new, Subset t1,
                                             Subset t2, const RuleOptions& opts = {}) {
  const std::string axiom = "pairwise-threshold-monotonicity";
  if (v_old.n() != v_new.n() || v_old.house_size != v_new.house_size)
    return detail::inconclusive(axiom, "profiles disagree on n or h");
  QuotaBreakdown q_old = compute_quotas(v_old);
  QuotaBreakdown q_new = compute_quotas(v_new);
  if (!detail::quota_shift_ok(q_old, q_new, t1, t2, true))
    return detail::inconclusive(axiom, "quota shift violates T1/T2 preconditions");
  SeatDistribution d_old = induce_apportionment(rule, v_old, opts);
  SeatDistribution d_new = induce_apportionment(rule, v_new, opts);
  Rat slack = rule_slack(rule, opts);
  DominanceVerdict d1 = dominance_compare(d_old, d_new, t1, slack);
  DominanceVerdict d2 = dominance_compare(d_new, d_old, t2, slack);
  AuditVerdict v;
  v.axiom = axiom;
  v.witness = "T1=" + subset_to_string(t1) + " T2=" + subset_to_string(t2);
  if (d1.dominates || d2.dominates) {
    v.outcome = Outcome::satisfied;
  } else {
    v.outcome = Outcome::violated;
    v.theta = d1.violating_theta;
    v.values = {{"T1_tail_old", d1.tail_old},
                {"T1_tail_new", d1.tail_new},
                {"T2_tail_new", d2.tail_old},
                {"T2_tail_old", d2.tail_new}};
  }
  return v;
}

// Same dominance logic with raw-vote-count preconditions.
inline AuditVerdict check_vote_count_threshold(Rule rule, const VoteProfile& v_old,
                                               const VoteProfile& v_new, Subset t,
                                               const RuleOptions& opts = {}) {
  const std::string axiom = "vote-count-threshold-monotonicity";
  if (v_old.n() != v_new.n() || v_old.house_size != v_new.house_size)
    return detail::inconclusive(axiom, "profiles disagree on n or h");
  if (!detail::vote_shift_ok(v_old, v_new, t, 0, false))
    return detail::inconclusive(axiom, "vote shift is not monotone toward T");
  SeatDistribution d_old = induce_apportionment(rule, v_old, opts);
  SeatDistribution d_new = induce_apportionment(rule, v_new, opts);
  DominanceVerdict d = dominance_compare(d_old, d_new, t, rule_slack(rule, opts));
  return detail::dominance_verdict(axiom, "T=" + subset_to_string(t), d);
}

inline AuditVerdict check_pairwise_vote_count_threshold(
    Rule rule, const VoteProfile& v_old, const VoteProfile& v_new, Subset t1,
    Subset t2, const RuleOptions& opts = {}) {
  const std::string axiom = "pairwise-vote-count-threshold-monotonicity";
  if (v_old.n() != v_new.n() || v_old.house_size != v_new.house_size)
    return detail::inconclusive(axiom, "profiles disagree on n or h");
  if (!detail::vote_shift_ok(v_old, v_new, t1, t2, true))
    return detail::inconclusive(axiom, "vote shift violates T1/T2 preconditions");
  SeatDistribution d_old = induce_apportionment(rule, v_old, opts);
  SeatDistribution d_new = induce_apportionment(rule, v_new, opts);
  Rat slack = rule_slack(rule, opts);
  DominanceVerdict d1 = dominance_compare(d_old, d_new, t1, slack);
  DominanceVerdict d2 = dominance_compare(d_new, d_old, t2, slack);
  AuditVerdict v;
  v.axiom = axiom;
  v.witness = "T1=" + subset_to_string(t1) + " T2=" + subset_to_string(t2);
  if (d1.dominates || d2.dominates) {
    v.outcome = Outcome::satisfied;
  } else {
    v.outcome = Outcome::violated;
    v.theta = d1.violating_theta;
    v.values = {{"T1_tail_old", d1.tail_old}, {"T1_tail_new", d1.tail_new}};
  }
  return v;
}

// Full support: every quota-respecting seat vector, equivalently every
// k-subset of the parties with positive residue, has positive mass.
inline AuditVerdict check_full_support(Rule rule, const VoteProfile& votes,
                                       const RuleOptions& opts = {}) {
  const std::string axiom = "full-support";
  QuotaBreakdown quota = compute_quotas(votes);
  const ResidueProfile& p = quota.residues;
  std::vector<int> positive;
  for (int i = 1; i <= p.n(); ++i)
    if (p.p(i) > 0) positive.push_back(i);
  KSubsetDistribution dist = rule_distribution(rule, p, opts);
  AuditVerdict v;
  v.axiom = axiom;
  for (Subset inner : enumerate_k_subsets(static_cast<int>(positive.size()), p.k)) {
    Subset s = 0;
    for (int idx : subset_members(inner)) s |= Subset(1) << (positive[idx - 1] - 1);
    if (dist.prob(s) <= 0) {
      v.outcome = Outcome::violated;
      v.witness = "zero mass on " + subset_to_string(s);
      v.values = {{"P[S=T]", dist.prob(s)}};
      return v;
    }
  }
  v.outcome = Outcome::satisfied;
  return v;
}

// Fixed witness: on votes (1,2,1,2), h=2, positive probability of
// the seat vector (1,0,1,0) rules out house monotonicity for the rule.
inline AuditVerdict check_house_monotonicity_witness(Rule rule,
                                                     const RuleOptions& opts = {}) {
  VoteProfile votes{{Rat(1), Rat(2), Rat(1), Rat(2)}, 2};
  SeatDistribution dist = induce_apportionment(rule, votes, opts);
  Rat prob = dist.prob({1, 0, 1, 0});
  AuditVerdict v;
  v.axiom = "house-monotonicity";
  v.witness = "seat vector (1,0,1,0) on votes (1,2,1,2), h=2";
  v.values = {{"P[(1,0,1,0)]", prob}};
  v.outcome = prob > 0 ? Outcome::violated : Outcome::satisfied;
  return v;
}

}  // namespace apportion
