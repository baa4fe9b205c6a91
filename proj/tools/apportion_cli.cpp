#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "apportion/io.hpp"
#include "apportion/sampling.hpp"
#include "apportion/scenarios.hpp"

namespace {

using namespace apportion;

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInconclusive = 4;

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// --order numeric | random | explicit:3,1,2,...
void apply_order_flag(const std::string& order_flag, InstanceFile& inst) {
  if (order_flag.empty() || order_flag == "numeric") return;
  if (order_flag == "random") {
    inst.random_order = true;
    return;
  }
  const std::string prefix = "explicit:";
  if (order_flag.rfind(prefix, 0) != 0)
    throw std::invalid_argument("--order must be numeric, random, or explicit:<perm>");
  inst.order.clear();
  std::stringstream ss(order_flag.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) inst.order.push_back(std::stoi(item));
}

// --mode exact | float:<bits>; float mode only changes the working precision
// of the conditional Poisson solve, everything else is exact regardless
std::string apply_mode_flag(const std::string& mode_flag, InstanceFile& inst) {
  if (mode_flag.empty() || mode_flag == "exact") return "exact";
  const std::string prefix = "float:";
  if (mode_flag.rfind(prefix, 0) != 0)
    throw std::invalid_argument("--mode must be exact or float:<bits>");
  inst.precision_bits = static_cast<unsigned>(std::stoul(mode_flag.substr(prefix.size())));
  return mode_flag;
}

Subset subset_flag(const std::string& csv) {
  Subset s = 0;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int party = std::stoi(item);
    if (party < 1 || party > kMaxParties) throw std::invalid_argument("bad coalition entry");
    s |= Subset(1) << (party - 1);
  }
  if (s == 0) throw std::invalid_argument("empty coalition");
  return s;
}

Subset sample_subset(Rule rule, const ResidueProfile& p, const InstanceFile& inst) {
  switch (rule) {
    case Rule::systematic:
      return systematic_sample(p, inst.rng_seed, inst.order, inst.random_order);
    case Rule::pipage:
      return pipage_sample(p, inst.rng_seed, inst.order, inst.random_order);
    case Rule::sampford:
      return sampford_sample(p, inst.rng_seed, inst.max_restarts);
    case Rule::conditional_poisson: {
      // no rejective sampler here; draw from the exact distribution
      KSubsetDistribution d = rule_distribution(rule, p, inst.rule_options());
      std::mt19937_64 rng(inst.rng_seed);
      Rat u = uniform01_rat(rng) * d.total_mass();
      Rat acc = 0;
      for (const auto& [s, m] : d.mass) {
        acc += m;
        if (u < acc) return s;
      }
      return d.mass.rbegin()->first;
    }
  }
  throw std::logic_error("unreachable");
}

int cmd_apportion(const std::string& instance_path, const std::string& rule_name_flag,
                  std::uint64_t seed, const std::string& order_flag, int house_flag,
                  const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  InstanceFile inst = load_instance(instance_path, house_flag);
  apply_order_flag(order_flag, inst);
  inst.rng_seed = seed;
  Rule rule = parse_rule(rule_name_flag);

  nlohmann::json results;
  std::string seats_line;
  if (inst.mode == "votes") {
    VoteProfile votes = inst.vote_profile();
    QuotaBreakdown quota = compute_quotas(votes);
    Subset chosen = sample_subset(rule, quota.residues, inst);
    nlohmann::json seats = nlohmann::json::array();
    for (int i = 1; i <= votes.n(); ++i) {
      long seat = static_cast<long>(quota.lower_quotas[i - 1]) +
                  (subset_contains(chosen, i) ? 1 : 0);
      seats.push_back(seat);
      seats_line += (i > 1 ? " " : "") + std::to_string(seat);
    }
    results["seats"] = seats;
    results["rounded_up"] = subset_to_string(chosen);
  } else {
    ResidueProfile p = inst.residue_profile();
    Subset chosen = sample_subset(rule, p, inst);
    nlohmann::json seats = nlohmann::json::array();
    for (int i = 1; i <= p.n(); ++i) {
      int seat = subset_contains(chosen, i) ? 1 : 0;
      seats.push_back(seat);
      seats_line += (i > 1 ? " " : "") + std::to_string(seat);
    }
    results["seats"] = seats;
    results["rounded_up"] = subset_to_string(chosen);
  }
  std::cout << seats_line << "\n";
  write_report(make_report("apportion", "exact", instance_echo(inst), results,
                           elapsed_ms(start)),
               out_path.empty() ? "/dev/null" : out_path);
  return kExitSatisfied;
}

int cmd_dist(const std::string& instance_path, const std::string& rule_name_flag,
             const std::string& order_flag, const std::string& mode_flag, int house_flag,
             const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  InstanceFile inst = load_instance(instance_path, house_flag);
  apply_order_flag(order_flag, inst);
  std::string arithmetic = apply_mode_flag(mode_flag, inst);
  Rule rule = parse_rule(rule_name_flag);

  nlohmann::json results;
  if (inst.mode == "votes") {
    SeatDistribution d =
        induce_apportionment(rule, inst.vote_profile(), inst.rule_options());
    results["selection"] = distribution_json(
        rule_distribution(rule, d.quota.residues, inst.rule_options()));
    results["seats"] = seat_distribution_json(d);
  } else {
    results["selection"] = distribution_json(
        rule_distribution(rule, inst.residue_profile(), inst.rule_options()));
  }
  write_report(make_report("dist", arithmetic, instance_echo(inst), results,
                           elapsed_ms(start)),
               out_path);
  return kExitSatisfied;
}

int cmd_audit(const std::string& old_path, const std::string& new_path,
              const std::string& axiom, const std::string& rule_name_flag,
              const std::string& coalition, const std::string& coalition2,
              const std::string& order_flag, const std::string& mode_flag, int house_flag,
              const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  InstanceFile inst_old = load_instance(old_path, house_flag);
  InstanceFile inst_new = load_instance(new_path, house_flag);
  apply_order_flag(order_flag, inst_old);
  std::string arithmetic = apply_mode_flag(mode_flag, inst_old);
  Rule rule = parse_rule(rule_name_flag);
  RuleOptions opts = inst_old.rule_options();

  Subset t1 = coalition.empty() ? 0 : subset_flag(coalition);
  Subset t2 = coalition2.empty() ? 0 : subset_flag(coalition2);

  AuditVerdict verdict;
  if (axiom == "selection") {
    verdict = check_selection_monotonicity(rule, inst_old.residue_profile(),
                                           inst_new.residue_profile(), t1, opts);
  } else if (axiom == "pairwise-selection") {
    verdict = check_pairwise_selection(rule, inst_old.residue_profile(),
                                       inst_new.residue_profile(), t1, t2, opts);
  } else if (axiom == "lipschitz") {
    verdict = check_lipschitz(rule, inst_old.residue_profile(),
                              inst_new.residue_profile(), t1, opts);
  } else if (axiom == "threshold") {
    verdict = check_threshold_monotonicity(rule, inst_old.vote_profile(),
                                           inst_new.vote_profile(), t1, opts);
  } else if (axiom == "pairwise-threshold") {
    verdict = check_pairwise_threshold(rule, inst_old.vote_profile(),
                                       inst_new.vote_profile(), t1, t2, opts);
  } else if (axiom == "vote-count") {
    verdict = check_vote_count_threshold(rule, inst_old.vote_profile(),
                                         inst_new.vote_profile(), t1, opts);
  } else if (axiom == "pairwise-vote-count") {
    verdict = check_pairwise_vote_count_threshold(rule, inst_old.vote_profile(),
                                                  inst_new.vote_profile(), t1, t2, opts);
  } else if (axiom == "full-support") {
    verdict = check_full_support(rule, inst_old.vote_profile(), opts);
  } else {
    throw std::invalid_argument("unknown axiom: " + axiom);
  }

  nlohmann::json input;
  input["old"] = instance_echo(inst_old);
  input["new"] = instance_echo(inst_new);
  write_report(make_report("audit", arithmetic, input, verdict_json(verdict),
                           elapsed_ms(start)),
               out_path);
  switch (verdict.outcome) {
    case Outcome::satisfied: return kExitSatisfied;
    case Outcome::violated: return kExitViolated;
    case Outcome::inconclusive: return kExitInconclusive;
  }
  return kExitNumeric;
}

bool glob_match(const std::string& pattern, const std::string& text) {
  // '*' wildcard only
  std::size_t p = 0, t = 0, star = std::string::npos, backtrack = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == text[t])) {
      ++p, ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      backtrack = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++backtrack;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

int cmd_verify(const std::string& pattern, const std::string& data_path,
               const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  ScenarioData data = load_scenario_data(data_path);
  std::vector<const PaperScenario*> selected;
  for (const PaperScenario& s : scenario_registry())
    if (pattern.empty() || glob_match(pattern, s.id) ||
        s.id.find(pattern) != std::string::npos)
      selected.push_back(&s);
  if (selected.empty()) {
    std::cerr << "warning: no scenario matches \"" << pattern << "\"\n";
    return kExitSatisfied;
  }

  std::vector<ScenarioResult> results(selected.size());
  int threads = std::min<int>(audit_thread_count(), static_cast<int>(selected.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < selected.size(); ++i)
      results[i] = run_scenario(selected[i]->id, data);
  } else {
    std::vector<std::future<void>> parts;
    for (int part = 0; part < threads; ++part)
      parts.push_back(std::async(std::launch::async, [&, part]() {
        for (std::size_t i = part; i < selected.size(); i += threads)
          results[i] = run_scenario(selected[i]->id, data);
      }));
    for (auto& f : parts) f.get();
  }

  bool all_passed = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const ScenarioResult& r : results) {
    all_passed = all_passed && r.passed;
    std::printf("%-24s %-4s %s\n", r.id.c_str(), r.passed ? "pass" : "FAIL",
                r.note.c_str());
    nlohmann::json row;
    row["id"] = r.id;
    row["passed"] = r.passed;
    row["verdict"] = verdict_json(r.verdict);
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  if (!out_path.empty())
    write_report(make_report("verify", "exact", {{"pattern", pattern}}, rows,
                             elapsed_ms(start)),
                 out_path);
  return all_passed ? kExitSatisfied : kExitViolated;
}

int cmd_search(const std::string& rule_name_flag, const std::string& axiom, int n, int k,
               int house, long trials, std::uint64_t seed, const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
  Rule rule = parse_rule(rule_name_flag);
  nlohmann::json results;
  bool found = false;
  if (axiom == "threshold") {
    SearchConfig cfg;
    cfg.rule = rule;
    cfg.n = n;
    cfg.coalition_size = k;
    cfg.house_size = house;
    cfg.trials = trials;
    cfg.seed = seed;
    if (auto w = search_counterexamples(cfg)) {
      found = true;
      results["trial"] = w->trial;
      results["coalition"] = subset_to_string(w->t);
      nlohmann::json v_old = nlohmann::json::array(), v_new = nlohmann::json::array();
      for (const Rat& v : w->v_old.votes) v_old.push_back(rat_to_string(v));
      for (const Rat& v : w->v_new.votes) v_new.push_back(rat_to_string(v));
      results["votes_old"] = v_old;
      results["votes_new"] = v_new;
      results["house_size"] = w->v_old.house_size;
      results["verdict"] = verdict_json(w->verdict);
    }
  } else if (axiom == "selection") {
    SelectionSearchConfig cfg;
    cfg.rule = rule;
    cfg.n = n;
    cfg.k = k;
    cfg.trials = trials;
    cfg.seed = seed;
    if (auto w = search_selection_counterexamples(cfg)) {
      found = true;
      results["trial"] = w->trial;
      results["coalition"] = subset_to_string(w->t);
      nlohmann::json p_old = nlohmann::json::array(), p_new = nlohmann::json::array();
      for (const Rat& v : w->p_old.residues) p_old.push_back(rat_to_string(v));
      for (const Rat& v : w->p_new.residues) p_new.push_back(rat_to_string(v));
      results["residues_old"] = p_old;
      results["residues_new"] = p_new;
      results["verdict"] = verdict_json(w->verdict);
    }
  } else {
    throw std::invalid_argument("search supports --axiom threshold or selection");
  }
  if (found)
    std::cout << "violation found: " << results.dump() << "\n";
  else
    std::cout << "none found in " << trials << " trials\n";
  if (!out_path.empty()) {
    nlohmann::json input = {{"rule", rule_name_flag}, {"axiom", axiom}, {"n", n},
                            {"k", k},                 {"trials", trials}, {"seed", seed}};
    write_report(make_report("search", "exact", input, results, elapsed_ms(start)),
                 out_path);
  }
  return found ? kExitViolated : kExitSatisfied;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized apportionment toolkit"};
  app.require_subcommand(1);

  std::string instance_path, instance_new_path, rule = "sampford", order, mode, axiom;
  std::string coalition, coalition2, out_path, pattern;
  std::string data_path = "data/counterexamples.json";
  std::uint64_t seed = 0;
  int house = 0, n = 6, k = 3, threshold = 0;
  long trials = 1000;

  CLI::App* ap = app.add_subcommand("apportion", "sample one apportionment");
  ap->add_option("instance", instance_path)->required();
  ap->add_option("--rule", rule);
  ap->add_option("--seed", seed);
  ap->add_option("--order", order);
  ap->add_option("--house", house);
  ap->add_option("--out", out_path);

  CLI::App* di = app.add_subcommand("dist", "exact selection and seat distributions");
  di->add_option("instance", instance_path)->required();
  di->add_option("--rule", rule);
  di->add_option("--order", order);
  di->add_option("--mode", mode);
  di->add_option("--house", house);
  di->add_option("--out", out_path);

  CLI::App* au = app.add_subcommand("audit", "check an axiom on an instance pair");
  au->add_option("old", instance_path)->required();
  au->add_option("new", instance_new_path)->required();
  au->add_option("--axiom", axiom)->required();
  au->add_option("--rule", rule);
  au->add_option("--coalition", coalition);
  au->add_option("--coalition2", coalition2);
  au->add_option("--threshold", threshold);
  au->add_option("--order", order);
  au->add_option("--mode", mode);
  au->add_option("--house", house);
  au->add_option("--out", out_path);

  CLI::App* ve = app.add_subcommand("verify", "run the named-instance registry");
  ve->add_option("pattern", pattern);
  ve->add_option("--data", data_path);
  ve->add_option("--out", out_path);

  CLI::App* se = app.add_subcommand("search", "randomized counterexample search");
  se->add_option("--rule", rule);
  se->add_option("--axiom", axiom)->required();
  se->add_option("--n", n);
  se->add_option("--k", k);
  se->add_option("--house", house);
  se->add_option("--trials", trials);
  se->add_option("--seed", seed);
  se->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (ap->parsed()) return cmd_apportion(instance_path, rule, seed, order, house, out_path);
    if (di->parsed()) return cmd_dist(instance_path, rule, order, mode, house, out_path);
    if (au->parsed())
      return cmd_audit(instance_path, instance_new_path, axiom, rule, coalition, coalition2,
                       order, mode, house, out_path);
    if (ve->parsed()) return cmd_verify(pattern, data_path, out_path);
    if (se->parsed()) {
      if (house == 0) house = k + 2;
      return cmd_search(rule, axiom, n, k, house, trials, seed, out_path);
    }
  } catch (const SolveError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
