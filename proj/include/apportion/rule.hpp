#pragma once

#include <string>

#include "apportion/conditional_poisson.hpp"
#include "apportion/pipage.hpp"
#include "apportion/sampford.hpp"
#include "apportion/systematic.hpp"

namespace apportion {

enum class Rule { systematic, pipage, conditional_poisson, sampford };

struct RuleOptions {
  std::vector<int> order;     // systematic/pipage; empty means numeric
  bool random_order = false;  // exact uniform average over all orders
  unsigned precision_bits = 128;   // conditional Poisson solve
  double residual_target = 1e-12;  // conditional Poisson solve
};

inline Rule parse_rule(const std::string& name) {
  if (name == "grimmett" || name == "systematic") return Rule::systematic;
  if (name == "pipage") return Rule::pipage;
  if (name == "cp" || name == "conditional_poisson") return Rule::conditional_poisson;
  if (name == "sampford") return Rule::sampford;
  throw std::invalid_argument("unknown rule: " + name);
}

inline std::string rule_name(Rule rule) {
  switch (rule) {
    case Rule::systematic: return "grimmett";
    case Rule::pipage: return "pipage";
    case Rule::conditional_poisson: return "cp";
    case Rule::sampford: return "sampford";
  }
  return "?";
}

inline KSubsetDistribution rule_distribution(Rule rule, const ResidueProfile& p,
                                             const RuleOptions& opts = {}) {
  switch (rule) {
    case Rule::systematic:
      return opts.random_order ? systematic_random_order_distribution(p)
                               : systematic_distribution(p, opts.order);
    case Rule::pipage:
      return opts.random_order ? pipage_random_order_distribution(p)
                               : pipage_distribution(p, opts.order);
    case Rule::conditional_poisson: {
      WorkingProbabilities pi =
          conditional_poisson_solve(p, opts.precision_bits, opts.residual_target);
      return conditional_poisson_distribution(pi, p.k);
    }
    case Rule::sampford:
      return sampford_distribution(p);
  }
  throw std::logic_error("unreachable");
}

// Comparison slack appropriate for the rule: exact rules compare exactly,
// the conditional Poisson path carries the Newton residual.
inline Rat rule_slack(Rule rule, const RuleOptions& opts = {}) {
  if (rule != Rule::conditional_poisson) return Rat(0);
  // mass error is within a small multiple of the marginal residual
  return rational_from_float(BigFloat(opts.residual_target)) * 100;
}

}  // namespace apportion
