#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <cffkit/cff_build.hpp>
#include <cffkit/io.hpp>
#include <cffkit/verify.hpp>

using namespace cffkit;

namespace {

template <typename WriteFn>
std::string to_text(WriteFn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

}  // namespace

TEST_CASE("binary family files round trip byte for byte") {
  auto built = build_cff(12, 2, 2);
  const std::string text =
      to_text([&](std::ostream& os) { write_cff(os, built.family.dense(), 2, 2); });

  std::istringstream is(text);
  auto back = read_cff(is);
  CHECK(back.r == 2);
  CHECK(back.s == 2);
  CHECK(back.family == built.family.dense());

  const std::string again =
      to_text([&](std::ostream& os) { write_cff(os, back.family, back.r, back.s); });
  CHECK(again == text);
}

TEST_CASE("binary family files reject malformed content") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_cff(is);
  };
  CHECK_THROWS_AS(parse("BOGUS n=2 r=1 s=1 N=0\n"), InvalidParams);
  CHECK_THROWS_AS(parse("CFF n=2 r=1 N=0\n"), InvalidParams);            // missing key
  CHECK_THROWS_AS(parse("CFF n=2 r=1 s=x N=0\n"), InvalidParams);        // non-numeric
  CHECK_THROWS_AS(parse("CFF n=2 r=1 s=1 N=1\n"), InvalidParams);        // truncated rows
  CHECK_THROWS_AS(parse("CFF n=2 r=1 s=1 N=1\n101\n"), InvalidParams);   // wrong row length
  CHECK_THROWS_AS(parse("CFF n=2 r=1 s=1 N=1\n1x\n"), InvalidParams);    // bad character
  CHECK_THROWS_AS(parse("CFF n=2 r=1 s=1 N=0 z=9\n"), InvalidParams);    // trailing field
  CHECK_THROWS_AS(parse("CFF n=2 r=0 s=1 N=0\n"), InvalidParams);        // zero weight
}

TEST_CASE("function family files: tables and generator descriptors") {
  auto table = make_polynomial_family(9, 3, 2, 3).materialize();
  const std::string text = to_text([&](std::ostream& os) { write_fn_family(os, table); });
  std::istringstream is(text);
  auto back = read_fn_family(is);
  CHECK(back.n() == 9);
  CHECK(back.q() == 3);
  CHECK(back.count() == 3);
  for (u64 m = 0; m < 3; ++m)
    for (u64 x = 0; x < 9; ++x) CHECK(back.at(m, x) == table.at(m, x));

  auto lazy = make_polynomial_family(1 << 20, 1031, 2, 17);
  const std::string ltext = to_text([&](std::ostream& os) { write_fn_family(os, lazy); });
  CHECK(ltext.find("generator ") != std::string::npos);
  std::istringstream lis(ltext);
  auto lback = read_fn_family(lis);
  CHECK_FALSE(lback.materialized());
  CHECK(lback.count() == 17);
  for (u64 x : {u64(0), u64(12345), u64((1 << 20) - 1)})
    CHECK(lback.at(3, x) == lazy.at(3, x));

  // A generator that disagrees with its header is refused.
  std::string broken = ltext;
  broken.replace(broken.find("n=1048576"), 9, "n=1048577");
  std::istringstream bis(broken);
  CHECK_THROWS_AS(read_fn_family(bis), InvalidParams);
}

TEST_CASE("point-set files round trip") {
  auto h = build_hitting_set(4, 3, 1.0 / 3.0, "exact-product");
  const std::string text = to_text([&](std::ostream& os) { write_point_set(os, h); });
  std::istringstream is(text);
  auto back = read_point_set(is);
  CHECK(back.t == h.t);
  CHECK(back.k == h.k);
  CHECK(back.mode == h.mode);
  CHECK(back.points == h.points);

  std::istringstream bad("HS t=2 k=2 N=1 mode=exact-product\n1 3\n");
  CHECK_THROWS_AS(read_point_set(bad), InvalidParams);  // coordinate above t
}

TEST_CASE("separating-family files round trip and verify") {
  auto h = build_min_separating(8, 2, 3);
  const std::string text = to_text([&](std::ostream& os) { write_separating(os, h); });
  std::istringstream is(text);
  auto back = read_separating(is);
  CHECK(back.n == 8);
  CHECK(back.t == 2);
  CHECK(back.k == 3);
  CHECK(back.rows.size() == size_t(h.count));
  CHECK_FALSE(verify_separating_values(back.rows, back.n, back.t, back.k).has_value());
}

TEST_CASE("multiset files round trip") {
  auto h = build_min_separating(3, 2, 2);
  auto lifted = lift_to_multiset_separator(h, 2, 2);
  const std::string text = to_text([&](std::ostream& os) { write_multisets(os, lifted); });
  std::istringstream is(text);
  auto back = read_multisets(is, 2);
  REQUIRE(back.size() == lifted.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].r == 2);
    CHECK(back[i].v == lifted[i].v);
  }

  std::istringstream bad("0 3 1\n");
  CHECK_THROWS_AS(read_multisets(bad, 2), InvalidParams);  // multiplicity above r
}

TEST_CASE("outcome lines and item lists") {
  const std::vector<u8> bits = {1, 0, 0, 1, 1};
  const std::string text = to_text([&](std::ostream& os) { write_outcomes(os, bits); });
  CHECK(text == "10011\n");
  std::istringstream is(text);
  CHECK(read_outcomes(is, 5) == bits);
  std::istringstream wrong(text);
  CHECK_THROWS_AS(read_outcomes(wrong, 4), InvalidParams);
  std::istringstream junk("10x11\n");
  CHECK_THROWS_AS(read_outcomes(junk, 5), InvalidParams);

  const std::vector<u64> items = {2, 17, 341};
  const std::string itext = to_text([&](std::ostream& os) { write_item_list(os, items); });
  CHECK(itext == "2\n17\n341\n");
  std::istringstream iis(itext);
  CHECK(read_item_list(iis) == items);
}

TEST_CASE("report sidecar lands next to the family file") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "cffkit_io_test";
  fs::create_directories(dir);
  const auto path = (dir / "fam.cff").string();

  auto built = build_cff(10, 1, 1);
  write_report_sidecar(path, built.report);
  std::ifstream is(path + ".json");
  REQUIRE(is.good());
  nlohmann::json j;
  is >> j;
  CHECK(j["family_size"] == "25");
  CHECK(j["regime"] == "base");
  fs::remove_all(dir);
}
