#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "apportion/generators.hpp"
#include "apportion/rule.hpp"
#include "apportion/sampling.hpp"
#include "apportion/seats.hpp"

using namespace apportion;

namespace {

void check_is_valid_rounding(const KSubsetDistribution& d, const ResidueProfile& p) {
  CHECK(d.total_mass() == 1);
  for (const auto& [s, m] : d.mass) {
    CHECK(subset_size(s) == p.k);
    CHECK(m > 0);
  }
  std::vector<Rat> marg = d.marginals();
  for (int i = 1; i <= p.n(); ++i) CHECK(marg[i - 1] == p.p(i));
}

}  // namespace

TEST_CASE("exact rules reproduce their target marginals exactly") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    int k = 1 + static_cast<int>(rng() % (n - 1));
    ResidueProfile p = random_residue_profile(n, k, rng);

    check_is_valid_rounding(systematic_distribution(p), p);
    check_is_valid_rounding(pipage_distribution(p), p);
    check_is_valid_rounding(sampford_distribution(p), p);

    std::vector<int> order = shuffled_order(n, rng);
    check_is_valid_rounding(systematic_distribution(p, order), p);
    check_is_valid_rounding(pipage_distribution(p, order), p);
  }
}

TEST_CASE("random-order averaging keeps the marginals and adds exchangeability") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 4 + static_cast<int>(rng() % 2);
    int k = 1 + static_cast<int>(rng() % (n - 1));
    ResidueProfile p = random_residue_profile(n, k, rng);
    check_is_valid_rounding(systematic_random_order_distribution(p), p);
    check_is_valid_rounding(pipage_random_order_distribution(p), p);
  }

  // identical residues: order averaging must give the uniform distribution
  ResidueProfile flat = validate_residues(std::vector<Rat>(5, Rat(2, 5)), Rat(0));
  for (const KSubsetDistribution& d : {systematic_random_order_distribution(flat),
                                       pipage_random_order_distribution(flat)}) {
    CHECK(d.mass.size() == binomial(5, 2));
    for (const auto& [s, m] : d.mass) CHECK(m == Rat(1, 10));
  }
}

TEST_CASE("both Sampford formulas give the same distribution") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    int k = 1 + static_cast<int>(rng() % (n - 1));
    ResidueProfile p = random_residue_profile(n, k, rng);
    KSubsetDistribution a = sampford_distribution(p);
    KSubsetDistribution b = sampford_distribution_odds_form(p);
    CHECK(a.mass == b.mass);
  }
}

TEST_CASE("Sampford never selects a zero-residue party") {
  ResidueProfile p = validate_residues({Rat(0), Rat(1, 2), Rat(1, 2)}, Rat(0));
  KSubsetDistribution d = sampford_distribution(p);
  CHECK(d.prob(subset_of({2})) == Rat(1, 2));
  CHECK(d.prob(subset_of({3})) == Rat(1, 2));
  CHECK(d.prob(subset_of({1})) == 0);
}

TEST_CASE("conditional Poisson masses are proportional to weight products") {
  // weights (1,2,3), k=2: products 2, 3, 6 over {1,2}, {1,3}, {2,3}
  KSubsetDistribution d = conditional_poisson_distribution({Rat(1), Rat(2), Rat(3)}, 2);
  CHECK(d.prob(subset_of({1, 2})) == Rat(2, 11));
  CHECK(d.prob(subset_of({1, 3})) == Rat(3, 11));
  CHECK(d.prob(subset_of({2, 3})) == Rat(6, 11));

  CHECK_THROWS_AS(conditional_poisson_distribution({Rat(-1), Rat(2)}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(conditional_poisson_distribution({Rat(0), Rat(2)}, 2),
                  std::invalid_argument);
}

TEST_CASE("elementary symmetric polynomials match the closed forms") {
  std::vector<Rat> w = {Rat(2), Rat(3), Rat(5)};
  std::vector<Rat> e = elementary_symmetric(w, 3);
  CHECK(e[0] == 1);
  CHECK(e[1] == 10);
  CHECK(e[2] == 31);   // 6 + 10 + 15
  CHECK(e[3] == 30);

  // marginals mu_i = w_i e_{k-1}(w \ i) / e_k(w) must sum to k
  std::vector<Rat> mu = conditional_poisson_marginals(w, 2);
  CHECK(mu[0] + mu[1] + mu[2] == 2);
  CHECK(mu[0] == Rat(2 * 8, 31));  // e_1({3,5}) = 8
}

TEST_CASE("conditional Poisson solve hits the marginals within the residual") {
  std::mt19937_64 rng(34);
  Rat tol(1, BigInt("1000000000000"));
  for (int trial = 0; trial < 5; ++trial) {
    int n = 3 + static_cast<int>(rng() % 5);
    int k = 1 + static_cast<int>(rng() % (n - 1));
    ResidueProfile p = random_residue_profile(n, k, rng);
    WorkingProbabilities pi = conditional_poisson_solve(p);
    CHECK(pi.residual <= tol);
    KSubsetDistribution d = conditional_poisson_distribution(pi, k);
    CHECK(d.total_mass() == 1);
    std::vector<Rat> marg = d.marginals();
    for (int i = 1; i <= n; ++i) CHECK(rat_abs(marg[i - 1] - p.p(i)) <= tol);
  }
}

TEST_CASE("systematic selection picks intervals containing an integer") {
  // residues (0.5, 0.5, 0.5, 0.5): shifts below 1/2 select {2,4}, above {1,3}
  ResidueProfile p = validate_residues(std::vector<Rat>(4, Rat(1, 2)), Rat(0));
  std::vector<int> order = numeric_order(4);
  CHECK(systematic_select(p, {order, Rat(1, 4), Rat(0)}) == subset_of({2, 4}));
  CHECK(systematic_select(p, {order, Rat(3, 4), Rat(0)}) == subset_of({1, 3}));
  KSubsetDistribution d = systematic_distribution(p);
  CHECK(d.prob(subset_of({2, 4})) == Rat(1, 2));
  CHECK(d.prob(subset_of({1, 3})) == Rat(1, 2));
  CHECK(d.prob(subset_of({1, 2})) == 0);

  CHECK_THROWS_AS(systematic_select(p, {{1, 2, 3}, Rat(0), Rat(0)}), std::invalid_argument);
  CHECK_THROWS_AS(systematic_select(p, {{1, 2, 3, 3}, Rat(0), Rat(0)}), std::invalid_argument);
}

TEST_CASE("rule parsing and dispatch") {
  CHECK(parse_rule("grimmett") == Rule::systematic);
  CHECK(parse_rule("systematic") == Rule::systematic);
  CHECK(parse_rule("pipage") == Rule::pipage);
  CHECK(parse_rule("cp") == Rule::conditional_poisson);
  CHECK(parse_rule("conditional_poisson") == Rule::conditional_poisson);
  CHECK(parse_rule("sampford") == Rule::sampford);
  CHECK_THROWS_AS(parse_rule("dhondt"), std::invalid_argument);
  for (Rule r : {Rule::systematic, Rule::pipage, Rule::conditional_poisson, Rule::sampford})
    CHECK(parse_rule(rule_name(r)) == r);

  CHECK(rule_slack(Rule::systematic) == 0);
  CHECK(rule_slack(Rule::pipage) == 0);
  CHECK(rule_slack(Rule::sampford) == 0);
  CHECK(rule_slack(Rule::conditional_poisson) > 0);

  std::mt19937_64 rng(35);
  ResidueProfile p = random_residue_profile(5, 2, rng);
  CHECK(rule_distribution(Rule::sampford, p).mass == sampford_distribution(p).mass);
  CHECK(rule_distribution(Rule::systematic, p).mass == systematic_distribution(p).mass);
  RuleOptions random_order;
  random_order.random_order = true;
  CHECK(rule_distribution(Rule::pipage, p, random_order).mass ==
        pipage_random_order_distribution(p).mass);
}

TEST_CASE("induced seat distributions respect quota and expectations") {
  std::mt19937_64 rng(36);
  for (Rule rule : {Rule::systematic, Rule::pipage, Rule::sampford}) {
    int n = 4 + static_cast<int>(rng() % 3);
    int h = n + 1 + static_cast<int>(rng() % 8);
    VoteProfile votes = random_quota_profile(n, h, rng);
    SeatDistribution d = induce_apportionment(rule, votes);
    CHECK(d.h == h);
    for (const auto& [seats, m] : d.mass) {
      int total = 0;
      for (int i = 0; i < n; ++i) {
        total += seats[i];
        // quota: realized seats are the floor or ceiling of the standard quota
        CHECK(Rat(seats[i]) >= d.quota.quotas[i] - 1);
        CHECK(Rat(seats[i]) <= d.quota.quotas[i] + 1);
      }
      CHECK(total == h);
    }
    // ex-ante proportionality: expected seats equal the standard quotas
    std::vector<Rat> expected = d.expected_seats();
    for (int i = 0; i < n; ++i) CHECK(expected[i] == d.quota.quotas[i]);
  }
}

TEST_CASE("dominance_compare detects tail drops at the right threshold") {
  VoteProfile v{{Rat(1), Rat(1), Rat(2)}, 4};
  SeatDistribution a = induce_apportionment(Rule::sampford, v);
  DominanceVerdict same = dominance_compare(a, a, subset_of({1, 2}));
  CHECK(same.dominates);

  // degenerate distributions: coalition gets 2 seats vs 1 seat
  SeatDistribution lo, hi;
  lo.n = hi.n = 2;
  lo.h = hi.h = 2;
  lo.mass[{1, 1}] = 1;
  hi.mass[{2, 0}] = 1;
  DominanceVerdict up = dominance_compare(lo, hi, subset_of({1}));
  CHECK(up.dominates);
  DominanceVerdict down = dominance_compare(hi, lo, subset_of({1}));
  CHECK_FALSE(down.dominates);
  CHECK(down.violating_theta == 2);
  CHECK(down.tail_old == 1);
  CHECK(down.tail_new == 0);

  CHECK_THROWS_AS(dominance_compare(lo, a, 1), std::invalid_argument);
}
