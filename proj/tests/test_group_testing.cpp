#include <doctest.h>

#include <algorithm>

#include <cffkit/group_testing.hpp>
#include <cffkit/numeric.hpp>

using namespace cffkit;

TEST_CASE("design parameters are validated") {
  CHECK_THROWS_AS(design_tests(5, 0), InvalidParams);
  CHECK_THROWS_AS(design_tests(5, 5), InvalidParams);  // needs s < n
  CHECK_THROWS_AS(design_tests(0, 1), InvalidParams);
}

TEST_CASE("the 500-item pair design uses 196 pools") {
  auto d = design_tests(500, 2);
  CHECK(d.tests.rows() == 196);
  CHECK(d.tests.n() == 500);
  CHECK(d.report.family_size == 196);
  CHECK(d.report.tree.consistent());
}

TEST_CASE("every small defective set decodes exactly") {
  auto d = design_tests(10, 2);
  PoolingDecoder dec(d.tests);

  CHECK(dec.roundtrip({}).empty());
  for (u64 i = 1; i <= 10; ++i) {
    CHECK(dec.roundtrip({i}) == std::vector<u64>{i});
    for (u64 j = i + 1; j <= 10; ++j)
      CHECK(dec.roundtrip({i, j}) == std::vector<u64>{i, j});
  }
}

TEST_CASE("one past the guarantee still never drops a defective") {
  auto d = design_tests(10, 2);
  PoolingDecoder dec(d.tests);
  std::vector<u32> c = {0, 1, 2};
  do {
    const std::vector<u64> set = {c[0] + 1, c[1] + 1, c[2] + 1};
    auto got = dec.roundtrip(set);
    for (u64 item : set) CHECK(std::find(got.begin(), got.end(), item) != got.end());
  } while (next_combination(c, 10));
}

TEST_CASE("free functions agree with the cached decoder") {
  auto d = design_tests(12, 2);
  PoolingDecoder dec(d.tests);
  const std::vector<u64> defectives = {3, 11};
  auto outcome = simulate(d.tests, defectives);
  CHECK(outcome == dec.simulate(defectives));
  CHECK(decode(d.tests, outcome) == dec.decode(outcome));
  CHECK(decode(d.tests, outcome) == defectives);
}

TEST_CASE("inputs are validated") {
  auto d = design_tests(10, 2);
  CHECK_THROWS_AS(simulate(d.tests, {0}), InvalidParams);    // items are 1-based
  CHECK_THROWS_AS(simulate(d.tests, {11}), InvalidParams);   // out of range
  CHECK_THROWS_AS(decode(d.tests, std::vector<u8>(3, 0)), InvalidParams);  // wrong length
}

TEST_CASE("duplicate defective indices behave like a set") {
  auto d = design_tests(10, 2);
  PoolingDecoder dec(d.tests);
  CHECK(dec.roundtrip({4, 4}) == std::vector<u64>{4});
}
