#include <doctest.h>

#include <cmath>
#include <set>

#include <cffkit/numeric.hpp>
#include <cffkit/report.hpp>

using namespace cffkit;

TEST_CASE("primes and prime powers") {
  CHECK(is_prime(2));
  CHECK(is_prime(97));
  CHECK(is_prime(149));
  CHECK(is_prime(223));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));  // 7 * 13

  auto pp = prime_power_decompose(8);
  REQUIRE(pp.has_value());
  CHECK(pp->first == 2);
  CHECK(pp->second == 3);
  CHECK(prime_power_decompose(121)->first == 11);
  CHECK(prime_power_decompose(361)->first == 19);
  CHECK(prime_power_decompose(361)->second == 2);
  CHECK_FALSE(prime_power_decompose(12).has_value());
  CHECK_FALSE(prime_power_decompose(1).has_value());
  CHECK_FALSE(prime_power_decompose(0).has_value());
}

TEST_CASE("smallest prime power in a half-open window") {
  // Windows used by the base construction, one per small (ones, zeros)
  // profile; oracle values recomputed by scanning all integers.
  struct Case {
    u64 lo, hi, expect;
  };
  const Case cases[] = {
      {24, 48, 25},    {48, 96, 49},    {72, 144, 73},   {96, 192, 97},   {120, 240, 121},
      {144, 288, 149}, {192, 384, 193}, {216, 432, 223}, {360, 720, 361},
      // field windows of the hash-then-split pipeline at d = 4 and d = 6
      {64, 128, 67},   {216, 432, 223},
  };
  for (const auto& c : cases) {
    auto q = smallest_prime_power_in(c.lo, c.hi);
    REQUIRE(q.has_value());
    CHECK(*q == c.expect);
    CHECK(*q > c.lo);
    CHECK(*q <= c.hi);
    for (u64 v = c.lo + 1; v < *q; ++v) CHECK_FALSE(is_prime_power(v));
  }
  CHECK_FALSE(smallest_prime_power_in(13, 15).has_value());  // 14, 15 composite non-powers
  CHECK(next_prime_power_above(4) == 5);
  CHECK(next_prime_power_above(8) == 9);
  CHECK(next_prime_power_above(96) == 97);
}

TEST_CASE("binomials") {
  CHECK(binomial_u128(5, 3) == 10);
  CHECK(binomial_u128(25, 2) == 300);
  CHECK(binomial_u128(97, 2) == 4656);
  CHECK(binomial_u128(500, 2) == 124750);
  CHECK(binomial_u128(223, 3) == 1823471);
  CHECK(binomial_u128(4, 9) == 0);
  CHECK(binomial_u128(7, 0) == 1);
  // Pascal identity on a band of values.
  for (u64 n = 1; n <= 40; ++n)
    for (u64 k = 1; k <= n; ++k)
      CHECK(binomial_u128(n, k) == binomial_u128(n - 1, k - 1) + binomial_u128(n - 1, k));
  CHECK_THROWS_AS(binomial_u128(~u64(0), 3), CapacityError);
  CHECK(log2_binomial(8, 1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(log2_binomial(97, 2) == doctest::Approx(std::log2(4656.0)).epsilon(1e-12));
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.125) == doctest::Approx(0.5435644431995964).epsilon(1e-12));
  CHECK(binary_entropy(0.25) == binary_entropy(0.75));  // symmetry
}

TEST_CASE("combination enumeration, ranking, unranking") {
  std::vector<u32> c = {0, 1, 2};
  std::vector<std::vector<u32>> seen = {c};
  while (next_combination(c, 5)) seen.push_back(c);
  CHECK(seen.size() == 10);  // C(5,3)
  CHECK(seen.front() == std::vector<u32>{0, 1, 2});
  CHECK(seen.back() == std::vector<u32>{2, 3, 4});
  for (size_t i = 0; i + 1 < seen.size(); ++i) CHECK(seen[i] < seen[i + 1]);  // lexicographic

  for (u64 rank = 0; rank < 210; ++rank) {  // C(10,4)
    auto comb = unrank_combination(10, 4, rank);
    CHECK(rank_combination(10, comb) == rank);
  }
}

TEST_CASE("divisor helpers") {
  CHECK(largest_divisor_le(12, 5) == 4);
  CHECK(largest_divisor_le(12, 6) == 6);
  CHECK(largest_divisor_le(7, 3) == 1);
  CHECK(largest_divisor_le(9, 3) == 3);
  CHECK(largest_divisor_le(5, 5) == 5);

  CHECK(nearest_divisor(12, 4.9) == 4);
  CHECK(nearest_divisor(12, 5.0) == 4);  // equidistant from 4 and 6: ties go down
  CHECK(nearest_divisor(16, 4.0) == 4);
  CHECK(nearest_divisor(7, 2.0) == 1);   // 1 vs 7: 1 is closer
  CHECK(nearest_divisor(9, 100.0) == 9);
}

TEST_CASE("size yardstick") {
  // d * C(d,r) / log2 C(d,r); the (1,7) value is 8*8/3.
  CHECK(size_yardstick(1, 7) == doctest::Approx(64.0 / 3.0).epsilon(1e-12));
  CHECK(size_yardstick(2, 2) == doctest::Approx(4.0 * 6.0 / std::log2(6.0)).epsilon(1e-12));
  CHECK(size_yardstick(1, 1) == doctest::Approx(2.0 * 2.0 / 1.0).epsilon(1e-12));
}

TEST_CASE("u128 text and checked arithmetic") {
  const u128 big = (u128(0x0123456789abcdefULL) << 64) | 0xfedcba9876543210ULL;
  CHECK(parse_u128(to_string_u128(big)) == big);
  CHECK(to_string_u128(0) == "0");
  CHECK(to_string_u128(21320647920ULL) == "21320647920");
  CHECK_THROWS_AS(checked_mul(u128(1) << 127, 2), CapacityError);
  CHECK_THROWS_AS(checked_pow(10, 40), CapacityError);
  CHECK(checked_pow(3, 5) == 243);
}
