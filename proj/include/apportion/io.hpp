#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apportion/audit.hpp"
#include "apportion/profile.hpp"
#include "apportion/rule.hpp"

namespace apportion {

inline constexpr const char* kToolVersion = "1.0.0";

// One election instance plus rule options, read from JSON or CSV.
struct InstanceFile {
  std::string mode;         // "votes" or "residues"
  std::vector<Rat> values;  // votes or residues, exact
  int house_size = 0;       // votes mode only
  std::vector<int> order;   // optional explicit order
  bool random_order = false;
  unsigned precision_bits = 128;
  double residual_target = 1e-12;
  std::uint64_t max_restarts = 1000000;
  std::uint64_t rng_seed = 0;

  RuleOptions rule_options() const {
    RuleOptions opts;
    opts.order = order;
    opts.random_order = random_order;
    opts.precision_bits = precision_bits;
    opts.residual_target = residual_target;
    return opts;
  }

  VoteProfile vote_profile() const {
    if (mode != "votes") throw std::invalid_argument("instance is not in votes mode");
    return VoteProfile{values, house_size};
  }

  ResidueProfile residue_profile() const {
    if (mode == "residues") return validate_residues(values);
    return compute_quotas(vote_profile()).residues;
  }
};

namespace detail {

inline Rat json_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long long>());
  throw std::invalid_argument(
      "numeric fields must be integers or exact decimal strings: " + v.dump());
}

}  // namespace detail

inline InstanceFile parse_instance_json(const nlohmann::json& j) {
  InstanceFile f;
  f.mode = j.at("mode").get<std::string>();
  if (f.mode != "votes" && f.mode != "residues")
    throw std::invalid_argument("mode must be \"votes\" or \"residues\"");
  const nlohmann::json& arr = j.at(f.mode);
  for (const auto& v : arr) f.values.push_back(detail::json_rational(v));
  if (f.mode == "votes") f.house_size = j.at("house_size").get<int>();
  if (j.contains("order")) {
    for (const auto& v : j.at("order")) f.order.push_back(v.get<int>());
  }
  if (j.contains("options")) {
    const nlohmann::json& o = j.at("options");
    if (o.contains("precision_bits")) f.precision_bits = o.at("precision_bits").get<unsigned>();
    if (o.contains("residual_target")) f.residual_target = o.at("residual_target").get<double>();
    if (o.contains("max_restarts")) f.max_restarts = o.at("max_restarts").get<std::uint64_t>();
    if (o.contains("rng_seed")) f.rng_seed = o.at("rng_seed").get<std::uint64_t>();
  }
  return f;
}

// CSV votes: optional "party,votes" header, then one "<party>,<votes>" row per
// party. House size comes from the caller (CLI flag).
inline InstanceFile parse_instance_csv(std::istream& in, int house_size) {
  InstanceFile f;
  f.mode = "votes";
  f.house_size = house_size;
  std::string line;
  std::vector<std::pair<int, Rat>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("CSV rows must be party,votes: " + line);
    std::string first = line.substr(0, comma);
    if (first == "party") continue;  // header
    rows.emplace_back(std::stoi(first), parse_rational(line.substr(comma + 1)));
  }
  if (rows.empty()) throw std::invalid_argument("empty CSV instance");
  f.values.resize(rows.size());
  for (auto& [party, votes] : rows) {
    if (party < 1 || party > static_cast<int>(rows.size()))
      throw std::invalid_argument("CSV party index out of range");
    f.values[party - 1] = votes;
  }
  return f;
}

inline InstanceFile load_instance(const std::string& path, int house_size = 0) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return parse_instance_csv(in, house_size);
  InstanceFile f = parse_instance_json(nlohmann::json::parse(in));
  if (house_size > 0) f.house_size = house_size;
  return f;
}

// --- report emission --------------------------------------------------------

inline nlohmann::json instance_echo(const InstanceFile& f) {
  nlohmann::json j;
  j["mode"] = f.mode;
  nlohmann::json vals = nlohmann::json::array();
  for (const Rat& v : f.values) vals.push_back(rat_to_string(v));
  j[f.mode] = vals;
  if (f.mode == "votes") j["house_size"] = f.house_size;
  if (!f.order.empty()) j["order"] = f.order;
  return j;
}

inline nlohmann::json distribution_json(const KSubsetDistribution& d) {
  nlohmann::json j;
  j["n"] = d.n;
  j["k"] = d.k;
  nlohmann::json mass;
  for (const auto& [s, m] : d.mass) mass[subset_to_string(s)] = rat_to_string(m);
  j["mass"] = mass;
  nlohmann::json marg = nlohmann::json::array();
  for (const Rat& m : d.marginals()) marg.push_back(rat_to_string(m));
  j["marginals"] = marg;
  return j;
}

inline nlohmann::json seat_distribution_json(const SeatDistribution& d) {
  nlohmann::json j;
  j["house_size"] = d.h;
  nlohmann::json mass;
  for (const auto& [seats, m] : d.mass) {
    std::string key;
    for (std::size_t i = 0; i < seats.size(); ++i)
      key += (i ? "," : "") + std::to_string(seats[i]);
    mass["(" + key + ")"] = rat_to_string(m);
  }
  j["mass"] = mass;
  nlohmann::json expected = nlohmann::json::array();
  for (const Rat& q : d.expected_seats()) expected.push_back(rat_to_string(q));
  j["expected_seats"] = expected;
  return j;
}

inline nlohmann::json verdict_json(const AuditVerdict& v) {
  nlohmann::json j;
  j["axiom"] = v.axiom;
  j["outcome"] = outcome_name(v.outcome);
  if (!v.witness.empty()) j["witness"] = v.witness;
  if (v.theta) j["theta"] = *v.theta;
  nlohmann::json values;
  for (const auto& [key, val] : v.values) values[key] = rat_to_string(val);
  if (!values.empty()) j["values"] = values;
  return j;
}

inline nlohmann::json make_report(const std::string& command, const std::string& arithmetic,
                                  nlohmann::json input_echo, nlohmann::json results,
                                  long elapsed_ms) {
  nlohmann::json j;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["arithmetic"] = arithmetic;
  j["input"] = std::move(input_echo);
  j["results"] = std::move(results);
  j["timings"] = {{"total_ms", elapsed_ms}};
  return j;
}

inline void write_report(const nlohmann::json& report, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::ostringstream ss;
    ss << report.dump(2) << "\n";
    std::fputs(ss.str().c_str(), stdout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << report.dump(2) << "\n";
}

}  // namespace apportion
