#include <doctest.h>

#include <cffkit/fn_family.hpp>
#include <cffkit/numeric.hpp>

using namespace cffkit;

TEST_CASE("identity and constant families") {
  auto id = make_identity_family(7, 7);
  CHECK(id.count() == 1);
  CHECK(id.n() == 7);
  CHECK(id.q() == 7);
  for (u64 x = 0; x < 7; ++x) CHECK(id.at(0, x) == x + 1);

  auto c = make_constant_family(5, 9, 4);
  CHECK(c.count() == 1);
  for (u64 x = 0; x < 5; ++x) CHECK(c.at(0, x) == 4);
}

TEST_CASE("polynomial families collide in at most m-1 members") {
  // n = q^m exactly; distinct points are distinct degree-(m-1) polynomials,
  // so they agree on at most m-1 evaluation points.
  for (u32 m : {1u, 2u, 3u}) {
    const u64 q = 5, t = 5;
    const u64 n = checked_pow(q, m);
    auto f = make_polynomial_family(n, q, m, t);
    CHECK(f.count() == t);
    for (u64 x = 0; x < n; ++x)
      for (u64 y = x + 1; y < n; ++y) {
        u32 agree = 0;
        for (u64 g = 0; g < t; ++g)
          if (f.at(g, x) == f.at(g, y)) ++agree;
        CHECK(agree <= m - 1);
      }
  }
}

TEST_CASE("polynomial family preconditions") {
  CHECK_THROWS_AS(make_polynomial_family(10, 3, 2, 0), InvalidParams);   // t < 1
  CHECK_THROWS_AS(make_polynomial_family(10, 3, 2, 4), InvalidParams);   // t > q
  CHECK_THROWS_AS(make_polynomial_family(28, 3, 3, 3), InvalidParams);   // q^m < n
  CHECK_THROWS_AS(make_polynomial_family(10, 6, 2, 2), InvalidParams);   // 6 not a prime power
}

TEST_CASE("composition indexes inner * |outer| + outer") {
  auto outer = make_polynomial_family(25, 5, 2, 3);
  auto inner = make_polynomial_family(5, 5, 1, 5);
  auto comp = compose_families(outer, inner);
  CHECK(comp.count() == outer.count() * inner.count());
  CHECK(comp.n() == outer.n());
  CHECK(comp.q() == inner.q());
  for (u64 i = 0; i < u64(comp.count()); ++i) {
    const u64 oi = i % u64(outer.count());
    const u64 ii = i / u64(outer.count());
    for (u64 x = 0; x < comp.n(); ++x)
      CHECK(comp.at(i, x) == inner.at(ii, outer.at(oi, x) - 1));
  }
}

TEST_CASE("descriptor round trip") {
  const FnFamily cases[] = {
      make_identity_family(1000, 1000),
      make_constant_family(64, 3, 2),
      make_polynomial_family(49, 7, 2, 4),
      compose_families(make_polynomial_family(25, 5, 2, 3),
                       make_polynomial_family(5, 5, 1, 5)),
  };
  for (const auto& f : cases) {
    auto back = family_from_descriptor(f.descriptor());
    CHECK(back.n() == f.n());
    CHECK(back.q() == f.q());
    CHECK(back.count() == f.count());
    CHECK(back.kind() == f.kind());
    for (u128 m = 0; m < f.count(); ++m)
      for (u64 x = 0; x < f.n(); ++x) CHECK(back.at(m, x) == f.at(m, x));
  }
}

TEST_CASE("table round trip keeps values") {
  auto lazy = make_polynomial_family(9, 3, 2, 3);
  auto flat = lazy.materialize();
  CHECK(flat.materialized());
  for (u64 m = 0; m < 3; ++m)
    for (u64 x = 0; x < 9; ++x) CHECK(flat.at(m, x) == lazy.at(m, x));
}

TEST_CASE("stitched family: cut count, ranges, offsets") {
  // Domain [6] in z = 2 pieces; inner maps [6] -> [2]; piece 1 gets offset 2.
  std::vector<u32> table = {1, 2, 1, 2, 1, 2,   // member 0
                            2, 2, 1, 1, 2, 1};  // member 1
  auto inner = FnFamily::from_table(6, 2, table, "table");

  auto st = make_stitched_family(6, 2, 2, inner);
  CHECK(st.n() == 6);
  CHECK(st.q() == 4);
  // C(m-1, z-1) cut vectors, |inner|^z member tuples each.
  CHECK(st.count() == u128(5) * 4);
  for (u128 m = 0; m < st.count(); ++m) {
    u32 crossings = 0;
    u32 prev = 0;
    for (u64 x = 0; x < 6; ++x) {
      const u32 v = st.at(m, x);
      CHECK(v >= 1);
      CHECK(v <= 4);
      const u32 piece = (v - 1) / 2;
      if (x > 0) {
        CHECK(piece >= prev);                    // pieces advance left to right
        if (piece != prev) ++crossings;
      }
      prev = piece;
    }
    CHECK(crossings == 1);  // exactly one cut for z = 2 (cut strictly inside)
  }
}

TEST_CASE("stitched tuple rank: piece 0 most significant") {
  std::vector<u32> table = {1, 1, 1, 1,   // member 0: constant 1
                            2, 2, 2, 2};  // member 1: constant 2
  auto inner = FnFamily::from_table(4, 2, table, "table");
  auto st = make_stitched_family(4, 2, 2, inner);
  // cut_rank 0 is the first cut position; tuple rank 0b01 means piece 0 uses
  // member 0, piece 1 uses member 1.
  const u128 member = 0 * 4 + 1;  // cut 0, tuple (0,1)
  CHECK(st.at(member, 0) == 1);       // piece 0, inner member 0, offset 0
  CHECK(st.at(member, 3) == 2 + 2);   // piece 1, inner member 1, offset 2
}
