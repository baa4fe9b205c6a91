#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "apportion/generators.hpp"
#include "apportion/poisson_binomial.hpp"
#include "apportion/profile.hpp"
#include "apportion/rational.hpp"
#include "apportion/sampling.hpp"
#include "apportion/subset.hpp"

using namespace apportion;

TEST_CASE("parse_rational reads decimals, fractions and exponents") {
  CHECK(parse_rational("0.07") == Rat(7, 100));
  CHECK(parse_rational("1/3") == Rat(1, 3));
  CHECK(parse_rational("-3") == Rat(-3));
  CHECK(parse_rational("2.5e-3") == Rat(1, 400));
  CHECK(parse_rational("1.5E2") == Rat(150));
  CHECK(parse_rational("+0.5") == Rat(1, 2));
  CHECK(parse_rational("0") == Rat(0));
  CHECK(parse_rational("-0.0") == Rat(0));
  // long runs of leading zeros after the point must be read as decimal
  CHECK(parse_rational("0.0618342562928861") ==
        Rat(BigInt("618342562928861"), BigInt("10000000000000000")));
  CHECK(parse_rational("0.000000000000000000001") == Rat(1, BigInt("1000000000000000000000")));
}

TEST_CASE("parse_rational rejects malformed input") {
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("."), std::invalid_argument);
}

TEST_CASE("rat_to_string round-trips through parse_rational") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Rat x(static_cast<long>(rng() % 100000) - 50000, 1 + static_cast<long>(rng() % 9999));
    CHECK(parse_rational(rat_to_string(x)) == x);
  }
  CHECK(rat_to_string(Rat(6, 3)) == "2");
  CHECK(rat_to_string(Rat(-1, 2)) == "-1/2");
}

TEST_CASE("floor and ceil handle negatives") {
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_ceil(Rat(7, 2)) == 4);
  CHECK(rat_ceil(Rat(-7, 2)) == -3);
  CHECK(rat_floor(Rat(4)) == 4);
  CHECK(rat_ceil(Rat(4)) == 4);
}

TEST_CASE("rational_from_float is exact for binary floats") {
  CHECK(rational_from_float(BigFloat(3.5)) == Rat(7, 2));
  CHECK(rational_from_float(BigFloat(0)) == Rat(0));
  CHECK(rational_from_float(BigFloat(-0.125)) == Rat(-1, 8));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    double d = (static_cast<double>(rng()) / static_cast<double>(UINT64_MAX)) * 2 - 1;
    Rat back = rational_from_float(BigFloat(d));
    CHECK(float_from_rational(back).convert_to<double>() == d);
  }
}

TEST_CASE("subset helpers agree with each other") {
  Subset s = subset_of({1, 3, 5});
  CHECK(subset_size(s) == 3);
  CHECK(subset_contains(s, 3));
  CHECK_FALSE(subset_contains(s, 2));
  CHECK(subset_members(s) == std::vector<int>{1, 3, 5});
  CHECK(subset_to_string(s) == "{1,3,5}");
  CHECK(subset_of(subset_members(s)) == s);
}

TEST_CASE("enumerate_k_subsets is complete and colexicographic") {
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k <= n; ++k) {
      auto subsets = enumerate_k_subsets(n, k);
      CHECK(subsets.size() == binomial(n, k));
      for (std::size_t i = 0; i < subsets.size(); ++i) {
        CHECK(subset_size(subsets[i]) == k);
        if (i > 0) CHECK(subsets[i] > subsets[i - 1]);  // mask order = colex order
      }
    }
  }
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(3, 5) == 0);
  CHECK_THROWS_AS(enumerate_k_subsets(31, 2), std::invalid_argument);
}

TEST_CASE("validate_residues checks the domain and the integer sum") {
  CHECK_THROWS_AS(validate_residues({}, Rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(validate_residues({Rat(1)}, Rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(validate_residues({Rat(-1, 10), Rat(11, 10)}, Rat(0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_residues({Rat(1, 2), Rat(1, 3)}, Rat(0)), std::invalid_argument);

  ResidueProfile p = validate_residues({Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)}, Rat(0));
  CHECK(p.k == 2);
  CHECK(p.n() == 4);
  CHECK(p.p(1) == Rat(1, 2));
  CHECK(p.deficit(subset_of({1, 2})) == Rat(1));
}

TEST_CASE("validate_residues repairs tiny rounding noise but not more") {
  Rat eps(1, BigInt("100000000000"));  // 1e-11, inside the default 1e-9 tolerance
  ResidueProfile repaired = validate_residues({Rat(1, 2) + eps, Rat(1, 2)});
  CHECK(repaired.k == 1);
  Rat total = 0;
  for (const Rat& v : repaired.residues) total += v;
  CHECK(total == 1);

  CHECK_THROWS_AS(validate_residues({Rat(1, 2) + Rat(1, 100), Rat(1, 2)}),
                  std::invalid_argument);
}

TEST_CASE("compute_quotas splits votes into lower quotas and residues") {
  VoteProfile votes{{Rat(110), Rat(270), Rat(210), Rat(160), Rat(70), Rat(280)}, 11};
  QuotaBreakdown q = compute_quotas(votes);
  Rat quota_sum = 0, residue_sum = 0;
  BigInt lower_sum = 0;
  for (int i = 0; i < votes.n(); ++i) {
    CHECK(q.quotas[i] == Rat(q.lower_quotas[i], 1) + q.residues.residues[i]);
    quota_sum += q.quotas[i];
    residue_sum += q.residues.residues[i];
    lower_sum += q.lower_quotas[i];
  }
  CHECK(quota_sum == Rat(11));
  CHECK(lower_sum + rat_floor(residue_sum) == 11);
  CHECK(q.k == q.residues.k);

  CHECK_THROWS_AS(compute_quotas(VoteProfile{{Rat(0), Rat(0)}, 3}), std::invalid_argument);
  CHECK_THROWS_AS(compute_quotas(VoteProfile{{Rat(1)}, 0}), std::invalid_argument);
  CHECK_THROWS_AS(compute_quotas(VoteProfile{{Rat(-1), Rat(2)}, 1}), std::invalid_argument);
}

namespace {

// brute-force Poisson trial pmf by summing over all 2^n inclusion patterns
std::vector<Rat> brute_force_size_pmf(const ResidueProfile& p,
                                      std::optional<std::pair<int, int>> exclude) {
  std::vector<Rat> pmf(p.n() + 1, Rat(0));
  for (Subset b = 0; b < (Subset(1) << p.n()); ++b) {
    if (exclude && (subset_contains(b, exclude->first) || subset_contains(b, exclude->second)))
      continue;
    Rat prob = 1;
    for (int i = 1; i <= p.n(); ++i) {
      if (exclude && (i == exclude->first || i == exclude->second)) continue;
      prob *= subset_contains(b, i) ? p.p(i) : 1 - p.p(i);
    }
    pmf[subset_size(b)] += prob;
  }
  return pmf;
}

}  // namespace

TEST_CASE("poisson_binomial matches full enumeration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + static_cast<int>(rng() % 3);
    int k = 1 + static_cast<int>(rng() % (n - 1));
    ResidueProfile p = random_residue_profile(n, k, rng);

    PoissonTrialStats stats = poisson_binomial(p);
    std::vector<Rat> expected = brute_force_size_pmf(p, std::nullopt);
    for (int l = 0; l <= n; ++l) CHECK(stats.prob(l) == expected[l]);
    CHECK(stats.prob(-1) == 0);
    CHECK(stats.prob(n + 1) == 0);

    PoissonTrialStats hat = poisson_binomial(p, std::make_pair(1, n));
    std::vector<Rat> expected_hat = brute_force_size_pmf(p, std::make_pair(1, n));
    for (int l = 0; l <= n - 2; ++l) CHECK(hat.prob(l) == expected_hat[l]);
  }
  ResidueProfile p = random_residue_profile(4, 2, rng);
  CHECK_THROWS_AS(poisson_binomial(p, std::make_pair(2, 2)), std::invalid_argument);
}

TEST_CASE("truncated_deficit matches its defining sum") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + static_cast<int>(rng() % 4);
    int k = 1 + static_cast<int>(rng() % (n - 1));
    ResidueProfile p = random_residue_profile(n, k, rng);
    PoissonTrialStats stats = poisson_binomial(p);
    Rat direct = 0;
    for (int l = 0; l < k; ++l) direct += Rat(k - l) * stats.prob(l);
    CHECK(truncated_deficit(p) == direct);
  }
}

TEST_CASE("random generators produce valid instances") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    int k = 1 + static_cast<int>(rng() % (n - 1));
    ResidueProfile p = random_residue_profile(n, k, rng);
    CHECK(p.k == k);
    for (int i = 1; i <= n; ++i) {
      CHECK(p.p(i) > 0);
      CHECK(p.p(i) < 1);
    }

    Subset t = random_k_subset(n, k, rng);
    CHECK(subset_size(t) == k);
    CHECK(t < (Subset(1) << n));

    ResidueProfile shifted = random_monotone_residue_shift(p, t, rng);
    CHECK(shifted.k == k);
    for (int i = 1; i <= n; ++i) {
      if (subset_contains(t, i))
        CHECK(shifted.p(i) >= p.p(i));
      else
        CHECK(shifted.p(i) <= p.p(i));
    }

    int h = n + 2;
    VoteProfile v = random_quota_profile(n, h, rng);
    Rat sum = 0;
    for (const Rat& x : v.votes) sum += x;
    CHECK(sum == Rat(h));

    VoteProfile vn = random_monotone_quota_shift(v, t, rng);
    Rat sum2 = 0;
    for (int i = 1; i <= n; ++i) {
      sum2 += vn.votes[i - 1];
      if (subset_contains(t, i))
        CHECK(vn.votes[i - 1] >= v.votes[i - 1]);
      else
        CHECK(vn.votes[i - 1] <= v.votes[i - 1]);
    }
    CHECK(sum2 == Rat(h));
  }
}

TEST_CASE("uniform01_rat is a 53-bit dyadic in [0,1)") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 1000; ++i) {
    Rat u = uniform01_rat(rng);
    CHECK(u >= 0);
    CHECK(u < 1);
    CHECK((BigInt(1) << 53) % boost::multiprecision::denominator(u) == 0);
  }
}
