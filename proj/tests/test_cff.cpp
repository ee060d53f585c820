#include <doctest.h>

#include <cffkit/cff_build.hpp>
#include <cffkit/hash_families.hpp>
#include <cffkit/numeric.hpp>
#include <cffkit/sampler.hpp>
#include <cffkit/verify.hpp>

using namespace cffkit;

namespace {

BitFamily from_strings(const std::vector<std::string>& rows) {
  BitFamily f(u32(rows.front().size()));
  for (const auto& r : rows) f.append_row_string(r);
  return f;
}

}  // namespace

TEST_CASE("the minimal (4,(1,1)) family has four rows, never three") {
  auto good = from_strings({"1100", "1010", "0101", "0011"});
  CHECK_FALSE(verify_cff(good, 1, 1).has_value());

  // Exhaustive: no 3-row binary matrix over 4 columns is (1,1)-cover-free.
  for (u32 a = 0; a < 16; ++a)
    for (u32 b = 0; b < 16; ++b)
      for (u32 c = 0; c < 16; ++c) {
        BitFamily f(4);
        for (u32 word : {a, b, c}) {
          f.append_row_zero();
          for (u32 j = 0; j < 4; ++j)
            if (word >> j & 1) f.set_bit(f.rows() - 1, j);
        }
        CHECK(verify_cff(f, 1, 1).has_value());
      }
}

TEST_CASE("witnesses replay against the family that produced them") {
  auto broken = from_strings({"1100", "1010", "0101"});
  auto w = verify_cff(broken, 1, 1);
  REQUIRE(w.has_value());
  CHECK(w->kind == "cff");
  CHECK(replay_cff_witness(broken, *w));

  auto fixed = from_strings({"1100", "1010", "0101", "0011"});
  CHECK_FALSE(replay_cff_witness(fixed, *w));
}

TEST_CASE("complementing rows swaps the pattern split") {
  auto f = build_base_cff(10, 1, 2).materialize();
  CHECK_FALSE(verify_cff(f, 1, 2).has_value());
  auto g = complement_family(f);
  CHECK_FALSE(verify_cff(g, 2, 1).has_value());
  CHECK(complement_family(g) == f);
}

TEST_CASE("column restriction keeps the property") {
  auto f = build_base_cff(12, 2, 2).materialize();
  auto g = restrict_columns(f, 7);
  CHECK(g.n() == 7);
  CHECK_FALSE(verify_cff(g, 2, 2).has_value());
}

TEST_CASE("compositions of d into k parts with a floor") {
  CompositionList l421(4, 2, 1);
  CHECK(l421.count() == 3);
  CHECK(l421.all() ==
        std::vector<std::vector<u32>>{{1, 3}, {2, 2}, {3, 1}});

  CompositionList l622(6, 2, 2);
  CHECK(l622.all() ==
        std::vector<std::vector<u32>>{{2, 4}, {3, 3}, {4, 2}});

  // count matches enumeration across a band of shapes
  for (u32 d = 1; d <= 8; ++d)
    for (u32 k = 1; k <= d; ++k)
      for (u32 lo = 0; lo * k <= d; ++lo) {
        CompositionList l(d, k, lo);
        CHECK(l.count() == l.all().size());
        for (const auto& c : l.all()) {
          u32 sum = 0;
          for (u32 part : c) {
            CHECK(part >= lo);
            sum += part;
          }
          CHECK(sum == d);
        }
      }

  CHECK(CompositionList(3, 4, 1).count() == 0);  // floor can't be met
  CHECK_THROWS_AS(CompositionList(40, 20, 0).all(), CapacityError);
}

TEST_CASE("base families: pinned sizes and exhaustive verification") {
  auto f11 = build_base_cff(12, 1, 1);
  CHECK(f11.count() == 25);  // identity hash into GF(25), one row per point
  CHECK_FALSE(verify_cff(f11.materialize(), 1, 1).has_value());

  StageNode st;
  auto f22 = build_base_cff(12, 2, 2, &st);
  CHECK(f22.count() == 4656);  // C(97,2) subsets, identity hash
  CHECK(st.consistent());
  CHECK(st.recompute() == f22.count());
  CHECK_FALSE(verify_cff(f22.materialize(), 2, 2).has_value());
}

TEST_CASE("construction 1: pinned sizes and small verification") {
  auto f = build_cff_construction1(12, 2, 2, 2);
  CHECK(f.count() == 23136);
  CHECK_FALSE(verify_cff(f.materialize(), 2, 2).has_value());

  // Counts only for the heavier profile; full verification runs in the
  // acceptance gate.
  CHECK(build_cff_construction1(12, 2, 4, 2).count() == 1005216);
  CHECK(build_cff_construction2(12, 2, 4, 2).count() == 2056416);

  CHECK_THROWS_AS(build_cff_construction1(12, 3, 2, 1), InvalidParams);  // needs r <= s
  CHECK_THROWS_AS(build_cff_construction1(12, 2, 2, 3), InvalidParams);  // k > r
}

TEST_CASE("constructions 1 and 2 coincide at k = 1") {
  auto a = build_cff_construction1(12, 2, 2, 1);
  auto b = build_cff_construction2(12, 2, 2, 1);
  CHECK(a.count() == b.count());
  CHECK(a.materialize() == b.materialize());
}

TEST_CASE("multi-block families: exhaustive verification at desk scale") {
  MultiCffSpec one;
  one.blocks = {{1, 1, 0}};
  auto f1 = build_mcff(10, one);
  CHECK(f1.count == 25);
  CHECK_FALSE(verify_mcff(f1).has_value());

  MultiCffSpec two;
  two.blocks = {{1, 1, 0}, {1, 2, 0}};
  auto f2 = build_mcff(10, two);
  CHECK(f2.count == u128(25) * 49);
  CHECK_FALSE(verify_mcff(f2).has_value());

  auto empty = f2;
  empty.count = 0;
  CHECK_THROWS_AS(verify_mcff(empty), InvalidParams);
}

TEST_CASE("multi-block verification catches a truncated selector") {
  MultiCffSpec spec;
  spec.blocks = {{1, 1, 0}};
  auto f = build_mcff(30, spec);  // needs both hash members
  REQUIRE(f.selector.points.size() == 2);
  f.selector.points.resize(1);
  f.count = 25;  // 1 selector point * C(25,1) subsets
  auto w = verify_mcff(f);
  REQUIRE(w.has_value());
  CHECK(w->kind == "mcff");
  CHECK(w->blocks.size() == 1);
}

TEST_CASE("multi-block families: member count grows with the digit count") {
  MultiCffSpec spec;
  spec.blocks = {{1, 1, 0}};
  auto f = build_mcff(30, spec);  // 30 > 25 forces two digits, two hash members
  CHECK(f.hashes[0].count() == 2);
  CHECK(f.count == u128(2) * 25);
  CHECK_FALSE(verify_mcff(f).has_value());
}

TEST_CASE("multi-block families: cyclic reuse under a shared selector") {
  MultiCffSpec spec;
  spec.blocks = {{1, 1, 25}, {3, 5, 0}};
  auto f = build_mcff(600, spec);
  // Block 2 needs 30 members; block 1 tops out at its alphabet size 25 and
  // repeats cyclically under the shared 30-ary selector.
  CHECK(f.hash_periods[0] == 25);
  CHECK(f.hash_periods[1] == 30);
  CHECK(f.hashes[0].count() == 25);
  CHECK(f.selector.t == 30);
  CHECK(f.count == u128(900) * 25 * binomial_u128(361, 3));
  // Cyclic reuse keeps the per-block separation density above one half:
  // the worst pair collides in ceil(30/25) * (m-1) = 2 of 30 coordinates.
  auto d = shf_min_density(f.hashes[0], 1, 1);
  CHECK_FALSE(d.less_than(1, 2));
}

TEST_CASE("multi-block families: repetition past the density budget is refused") {
  MultiCffSpec spec;
  spec.blocks = {{2, 2, 5}};  // tiny explicit alphabet, three digits at n = 26
  CHECK_THROWS_AS(build_mcff(26, spec), CapacityError);
}

TEST_CASE("heuristic selector is accepted only after verification") {
  MultiCffSpec spec;
  spec.blocks = {{1, 1, 0}, {1, 2, 0}};
  auto f = build_mcff(10, spec, "heuristic-random");
  CHECK_FALSE(verify_mcff(f).has_value());
}

TEST_CASE("regime dispatch and overrides") {
  auto base = build_cff(12, 2, 2);
  CHECK(base.report.regime == "base");
  CHECK(base.family.materialized());
  CHECK(base.family.count() == 4656);
  CHECK_FALSE(verify_cff(base.family.dense(), 2, 2).has_value());

  BuildOptions c1;
  c1.k = 2;
  c1.regime = "construction1";
  auto forced = build_cff(12, 2, 2, c1);
  CHECK(forced.report.regime == "construction1");
  CHECK(forced.family.count() == 23136);

  BuildOptions bad;
  bad.regime = "bogus";
  CHECK_THROWS_AS(build_cff(12, 2, 2, bad), InvalidParams);
  CHECK_THROWS_AS(build_cff(12, 0, 2, {}), InvalidParams);
  CHECK_THROWS_AS(build_cff(3, 2, 2, {}), InvalidParams);  // r + s > n
}

TEST_CASE("swapped pattern weights go through the complement path") {
  auto direct = build_cff(12, 1, 3);
  auto flipped = build_cff(12, 3, 1);
  CHECK(flipped.report.regime == "complement+" + direct.report.regime);
  CHECK(flipped.family.count() == direct.family.count());
  CHECK(flipped.family.count() == 73);
  CHECK_FALSE(verify_cff(flipped.family.dense(), 3, 1).has_value());
  CHECK(flipped.family.dense() == complement_family(direct.family.dense()));
}

TEST_CASE("size reports stay exact without materializing") {
  BuildOptions lazy;
  lazy.materialize = false;
  auto big = build_cff(1000000, 3, 13, lazy);
  CHECK_FALSE(big.family.materialized());
  CHECK(big.report.regime == "base");
  CHECK(big.family.count() == 21320647920ULL);
  CHECK(big.report.family_size == big.family.count());
  CHECK(big.report.tree.consistent());

  auto grid_worst = build_cff(14, 3, 3, lazy);
  CHECK(grid_worst.family.count() == 1823471);
  CHECK(grid_worst.family.count() == binomial_u128(223, 3));
}

TEST_CASE("builds are deterministic") {
  auto a = build_cff(12, 2, 2);
  auto b = build_cff(12, 2, 2);
  CHECK(a.family.dense() == b.family.dense());
  CHECK(a.report.to_json() == b.report.to_json());
}

TEST_CASE("stage tree arithmetic with repetition") {
  StageNode leaf;
  leaf.name = "unit";
  leaf.count = 3;
  StageNode prod;
  prod.name = "tuple";
  prod.combine = "product";
  prod.repeat = 2;
  prod.children = {leaf};
  prod.count = 9;
  CHECK(prod.recompute() == 9);
  CHECK(prod.consistent());
  prod.count = 8;
  CHECK_FALSE(prod.consistent());
}

TEST_CASE("random sampling: deterministic, verified, bounded") {
  auto f = sample_cff(12, 2, 2);
  CHECK_FALSE(verify_cff(f, 2, 2).has_value());
  CHECK(f.rows() <= 46560);  // ten times the constructed size
  auto again = sample_cff(12, 2, 2);
  CHECK(f == again);
  auto other = sample_cff(12, 2, 2, kSamplerSeed + 7);
  CHECK_FALSE(verify_cff(other, 2, 2).has_value());

  CHECK_THROWS_AS(sample_cff(3, 2, 2), InvalidParams);
  CHECK_THROWS_AS(sample_cff(30, 3, 3, kSamplerSeed, /*max_rows=*/4), CapacityError);
}
