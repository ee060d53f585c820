#include <doctest.h>

#include <cffkit/cff_build.hpp>
#include <cffkit/hash_families.hpp>
#include <cffkit/numeric.hpp>
#include <cffkit/verify.hpp>

using namespace cffkit;

TEST_CASE("rational fractions") {
  Rational r{6, 8};
  r.reduce();
  CHECK(r.num == 3);
  CHECK(r.den == 4);
  CHECK(r.less_than(4, 5));        // 3/4 < 4/5
  CHECK_FALSE(r.less_than(3, 4));  // not < itself
  CHECK_FALSE(r.less_than(1, 2));
}

TEST_CASE("perfect hash: identity below the range size") {
  auto h = build_phf(5, 9, 2);
  CHECK(h.count() == 1);
  for (u64 x = 0; x < 5; ++x) CHECK(h.at(0, x) == x + 1);
  CHECK_FALSE(verify_phf(h, 2).has_value());
}

TEST_CASE("perfect hash: smallest admissible field for pairs is 9") {
  // Pairs need q > 4*(1+1) = 8, and 9 = 3^2 is the first prime power there.
  CHECK_THROWS_AS(build_phf(81, 8, 2), InvalidParams);
  auto h = build_phf(81, 9, 2);
  CHECK(h.count() == 2);  // one collision allowed among 2 evaluation points
  CHECK_FALSE(verify_phf(h, 2).has_value());
}

TEST_CASE("perfect hash: relaxed mode runs small fields with all members") {
  auto h = build_phf(9, 3, 2, /*relaxed=*/true);
  CHECK(h.count() == 3);
  CHECK_FALSE(verify_phf(h, 2).has_value());
}

TEST_CASE("perfect hash: one self-composition level covers large n") {
  // Direct coverage stops at q^(q/(4*pairs)+1) = 9^3 = 729.
  auto small = build_phf(729, 9, 2);
  CHECK(small.count() == 3);
  auto big = build_phf(1000, 9, 2);
  CHECK(big.count() > small.count());
  CHECK_FALSE(verify_phf(big, 2).has_value());
}

TEST_CASE("verify_phf reports a colliding subset") {
  auto c = make_constant_family(6, 9, 3);
  auto w = verify_phf(c, 2);
  REQUIRE(w.has_value());
  CHECK(w->kind == "phf");
  CHECK(w->index_set.size() == 2);
}

TEST_CASE("dense separating family: identity below the range size") {
  auto h = build_dense_shf(5, 17, 1, 1);
  CHECK(h.count() == 1);
  auto d = shf_min_density(h, 1, 1);
  CHECK(d.num == 1);
  CHECK(d.den == 1);
}

TEST_CASE("dense separating family: threshold is exact") {
  // eps = 1/2 and (1,1) patterns need q > 4*(1+1)*2 = 16.
  CHECK_THROWS_AS(build_dense_shf(100, 16, 1, 1), InvalidParams);
  CHECK_THROWS_AS(build_dense_shf(100, 13, 1, 1), InvalidParams);
  auto h = build_dense_shf(100, 17, 1, 1);
  CHECK(h.count() == 2);  // ceil(cross * (m-1) * den/num) with m = 2
  auto d = shf_min_density(h, 1, 1);
  CHECK_FALSE(d.less_than(1, 2));  // measured density >= 1/2
}

TEST_CASE("dense separating family: measured density of a known table") {
  // 5 members of the 2-digit evaluation family over GF(5): two points share
  // a value in at most 1 member, so the worst (1,1) density is 4/5.
  auto f = make_polynomial_family(16, 5, 2, 5);
  auto d = shf_min_density(f, 1, 1);
  CHECK(d.num == 4);
  CHECK(d.den == 5);
}

TEST_CASE("row composition: bits come from the inner family through the hash") {
  auto outer = build_phf(30, 9, 2);
  auto inner_build = build_base_cff(9, 1, 1);
  auto composed = compose_with_rows(outer, inner_build);
  CHECK(composed.count() == outer.count() * inner_build.count());
  CHECK(composed.n() == 30);
  const u64 oc = u64(outer.count());
  for (u128 m = 0; m < composed.count(); ++m) {
    const u64 oi = u64(m) % oc;
    const u128 ii = m / oc;
    for (u32 x = 0; x < 30; ++x)
      CHECK(composed.bit(m, x) == inner_build.bit(ii, outer.at(oi, x) - 1));
  }
  // d-injective hash + (r,s) rows over the range give (r,s) rows over n
  // when r + s <= d.
  CHECK_FALSE(verify_cff(composed.materialize(), 1, 1).has_value());
}

TEST_CASE("quadratic perfect hash picks the first admissible field") {
  StageNode st;
  auto h = build_perfect_hash_quadratic(50, 2, &st);
  CHECK(h.q() == 9);  // next prime power above 4*(C(2,2-?)...) = 8
  CHECK_FALSE(verify_phf(h, 2).has_value());
}

TEST_CASE("compression onto [t] is t-perfect and small") {
  auto h4 = build_perfect_hash_compress(4, 2);
  CHECK(h4.count() == 2);
  auto h9 = build_perfect_hash_compress(9, 2);
  CHECK(h9.count() == 4);
  for (const auto* h : {&h4, &h9}) {
    const u64 m = h->n();
    std::vector<u32> pair = {0, 1};
    do {
      bool covered = false;
      for (u128 g = 0; g < h->count() && !covered; ++g) {
        // onto [2] bijectively: the two values are {1, 2}
        const u32 a = h->at(g, pair[0]), b = h->at(g, pair[1]);
        covered = (a != b);
      }
      CHECK(covered);
    } while (next_combination(pair, m));
  }
}
