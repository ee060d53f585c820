#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cffkit/cff_build.hpp>
#include <cffkit/group_testing.hpp>
#include <cffkit/io.hpp>
#include <cffkit/sampler.hpp>
#include <cffkit/separators.hpp>
#include <cffkit/verify.hpp>

namespace {

using namespace cffkit;

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidParams("cannot open " + path + " for reading");
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidParams("cannot open " + path + " for writing");
  return os;
}

std::vector<u64> parse_index_list(const std::string& csv) {
  std::vector<u64> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidParams("'" + item + "' is not an item index");
    }
  }
  return out;
}

/// Shared parameter block for `build` and `stats`.
struct BuildArgs {
  u64 n = 0;
  u32 r = 0, s = 0, k = 0;
  std::string regime = "auto";
  double phi = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("-n,--columns", n, "Number of columns (items)")->required();
    cmd->add_option("-r,--ones", r, "Ones per pattern")->required();
    cmd->add_option("-s,--zeros", s, "Zeros per pattern")->required();
    cmd->add_option("-k,--buckets", k, "Bucket count for the two composed regimes (0 = formula)");
    cmd->add_option("--regime", regime, "Force a regime instead of the size-based dispatch")
        ->check(CLI::IsMember({"auto", "base", "construction1", "construction2"}));
    cmd->add_option("--phi", phi, "Override the bucket-count divisor (0 = formula)");
  }

  BuildOptions options(bool materialize) const {
    BuildOptions opt;
    opt.k = k;
    opt.regime = regime == "auto" ? "" : regime;
    opt.phi = phi;
    opt.materialize = materialize;
    return opt;
  }
};

int run_build(const BuildArgs& a, const std::string& out, bool sampled, u64 seed, u64 cap) {
  if (cap != 0) set_materialization_cap(cap);
  BitFamily family;
  SizeReport report;
  if (sampled) {
    family = sample_cff(a.n, a.r, a.s, seed);
    StageNode leaf;
    leaf.name = "sampled";
    leaf.param("seed", u128(seed));
    leaf.param("density_num", u128(a.r));
    leaf.param("density_den", u128(a.r) + a.s);
    leaf.count = family.rows();
    report = make_size_report({a.n, a.r, a.s}, "sampled", std::move(leaf));
  } else {
    CffBuild b = build_cff(a.n, a.r, a.s, a.options(true));
    if (!b.family.materialized())
      throw CapacityError("family has " + to_string_u128(b.family.count()) +
                          " members; raise --cap to materialize it");
    family = b.family.dense();
    report = std::move(b.report);
  }
  auto os = open_out(out);
  write_cff(os, family, a.r, a.s);
  write_report_sidecar(out, report);
  std::cout << "wrote " << family.rows() << " rows over " << family.n() << " columns to " << out
            << " (regime " << report.regime << ")\n";
  return 0;
}

int run_verify(const std::string& path, u64 sample, u64 seed) {
  auto is = open_in(path);
  const CffFile f = read_cff(is);
  if (sample == 0) {
    if (auto w = verify_cff(f.family, f.r, f.s)) {
      std::cout << "NOT a (" << f.family.n() << ",(" << f.r << "," << f.s << "))-family\n"
                << w->to_string() << "\n";
      return 1;
    }
    std::cout << "verified: (" << f.family.n() << ",(" << f.r << "," << f.s << "))-family with "
              << f.family.rows() << " rows\n";
    return 0;
  }

  // Heuristic spot-check: `sample` random pattern obligations. Passing is NOT
  // a proof; a miss is a genuine counterexample.
  const u32 d = f.r + f.s;
  if (d > f.family.n()) throw InvalidParams("verify: r + s exceeds the column count");
  std::mt19937_64 eng(seed ^ 0x76657269667921ULL);
  for (u64 trial = 0; trial < sample; ++trial) {
    std::vector<u64> cols;
    while (cols.size() < d) {
      u64 c = eng() % f.family.n();
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    }
    std::sort(cols.begin(), cols.end());
    // Random r-subset of the chosen columns as the ones-pattern.
    u64 mask = 0;
    u32 picked = 0;
    while (picked < f.r) {
      u32 j = u32(eng() % d);
      if (!(mask >> j & 1)) {
        mask |= u64(1) << j;
        ++picked;
      }
    }
    bool hit = false;
    for (u64 row = 0; row < f.family.rows() && !hit; ++row) {
      bool ok = true;
      for (u32 j = 0; j < d && ok; ++j)
        ok = f.family.bit(row, u32(cols[j])) == bool(mask >> j & 1);
      hit = ok;
    }
    if (!hit) {
      Witness w;
      w.kind = "cff";
      for (u64 c : cols) w.index_set.push_back(c + 1);
      w.pattern_mask = mask;
      w.pattern_width = d;
      w.detail = "found by sampled probe " + std::to_string(trial);
      std::cout << "NOT a (" << f.family.n() << ",(" << f.r << "," << f.s << "))-family\n"
                << w.to_string() << "\n";
      return 1;
    }
  }
  std::cout << "heuristic probe: " << sample
            << " sampled obligations all realized (not an exhaustive proof)\n";
  return 0;
}

int run_stats(const BuildArgs& a) {
  CffBuild b = build_cff(a.n, a.r, a.s, a.options(false));
  std::cout << b.report.to_json().dump(2) << "\n";
  return 0;
}

int run_gt_design(u64 n, u32 s, const std::string& out) {
  PoolingDesign d = design_tests(n, s);
  auto os = open_out(out);
  write_cff(os, d.tests, 1, s);
  write_report_sidecar(out, d.report);
  std::cout << "wrote " << d.tests.rows() << " pools for " << n << " items to " << out << "\n";
  return 0;
}

int run_gt_simulate(const std::string& design, const std::string& defective,
                    const std::string& out) {
  auto is = open_in(design);
  const CffFile f = read_cff(is);
  const auto outcome = simulate(f.family, parse_index_list(defective));
  if (out == "-") {
    write_outcomes(std::cout, outcome);
  } else {
    auto os = open_out(out);
    write_outcomes(os, outcome);
  }
  return 0;
}

int run_gt_decode(const std::string& design, const std::string& outcomes, const std::string& out) {
  auto is = open_in(design);
  const CffFile f = read_cff(is);
  std::vector<u8> bits;
  if (outcomes == "-") {
    bits = read_outcomes(std::cin, f.family.rows());
  } else {
    auto osin = open_in(outcomes);
    bits = read_outcomes(osin, f.family.rows());
  }
  const auto items = decode(f.family, bits);
  if (out == "-") {
    write_item_list(std::cout, items);
  } else {
    auto os = open_out(out);
    write_item_list(os, items);
  }
  return 0;
}

int run_sep_build(u64 n, u32 t, u32 k, const std::string& out) {
  SeparatingFamily h = build_min_separating(n, t, k);
  auto os = open_out(out);
  write_separating(os, h);
  nlohmann::json j;
  j["n"] = h.n;
  j["t"] = h.t;
  j["k"] = h.k;
  j["family_size"] = to_string_u128(h.count);
  j["tree"] = h.stage.to_json();
  std::ofstream sidecar(out + ".json", std::ios::binary);
  if (!sidecar) throw InvalidParams("cannot open " + out + ".json for writing");
  sidecar << j.dump(2) << "\n";
  std::cout << "wrote " << to_string_u128(h.count) << " functions [" << h.n << "] -> [" << h.t + 1
            << "] to " << out << "\n";
  return 0;
}

int run_sep_verify(const std::string& path) {
  auto is = open_in(path);
  const SepFile f = read_separating(is);
  if (auto w = verify_separating_values(f.rows, f.n, f.t, f.k)) {
    std::cout << "NOT a (" << f.n << "," << f.t << "," << f.k << ")-separating family\n"
              << w->to_string() << "\n";
    return 1;
  }
  std::cout << "verified: (" << f.n << "," << f.t << "," << f.k << ")-separating family with "
            << f.rows.size() << " members\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cover-free families, pooling designs, and separating hash families"};
  app.require_subcommand(1);
  static std::function<int()> action;

  // ---- build ----------------------------------------------------------
  auto* build_cmd = app.add_subcommand("build", "Construct a family and write it to a file");
  static BuildArgs build_args;
  build_args.attach(build_cmd);
  static std::string build_out;
  static bool build_sampled = false;
  static u64 build_seed = kSamplerSeed;
  static u64 build_cap = 0;
  build_cmd->add_option("-o,--out", build_out, "Output file (sidecar: <out>.json)")->required();
  build_cmd->add_flag("--sampled", build_sampled,
                      "Draw random rows until the verifier accepts, instead of constructing");
  build_cmd->add_option("--seed", build_seed, "Seed for --sampled");
  build_cmd->add_option("--cap", build_cap, "Materialization cap in rows (0 = default)");
  build_cmd->callback([] {
    action = [] { return run_build(build_args, build_out, build_sampled, build_seed, build_cap); };
  });

  // ---- verify ---------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "Check the cover-free property of a family file");
  static std::string verify_path;
  static u64 verify_sample = 0;
  static u64 verify_seed = kSamplerSeed;
  verify_cmd->add_option("file", verify_path, "Family file written by `build`")->required();
  verify_cmd->add_option("--sample", verify_sample,
                         "Probe this many random obligations instead of all of them (heuristic)");
  verify_cmd->add_option("--seed", verify_seed, "Seed for --sample");
  verify_cmd->callback(
      [] { action = [] { return run_verify(verify_path, verify_sample, verify_seed); }; });

  // ---- stats ----------------------------------------------------------
  auto* stats_cmd =
      app.add_subcommand("stats", "Size report (exact count, yardsticks) without materializing");
  static BuildArgs stats_args;
  stats_args.attach(stats_cmd);
  stats_cmd->callback([] { action = [] { return run_stats(stats_args); }; });

  // ---- gt -------------------------------------------------------------
  auto* gt = app.add_subcommand("gt", "Non-adaptive group testing");
  gt->require_subcommand(1);

  auto* gtd = gt->add_subcommand("design", "Build a pooling design for up to s defectives");
  static u64 gt_n = 0;
  static u32 gt_s = 0;
  static std::string gt_out;
  gtd->add_option("-n,--items", gt_n, "Number of items")->required();
  gtd->add_option("-s,--defectives", gt_s, "Maximum number of defectives")->required();
  gtd->add_option("-o,--out", gt_out, "Output file (sidecar: <out>.json)")->required();
  gtd->callback([] { action = [] { return run_gt_design(gt_n, gt_s, gt_out); }; });

  auto* gts = gt->add_subcommand("simulate", "Pool outcomes for a known defective set");
  static std::string gts_design, gts_def, gts_out = "-";
  gts->add_option("--design", gts_design, "Design file from `gt design`")->required();
  gts->add_option("--defective", gts_def, "Comma-separated 1-based item indices")->required();
  gts->add_option("-o,--out", gts_out, "Output file (default: stdout)");
  gts->callback([] { action = [] { return run_gt_simulate(gts_design, gts_def, gts_out); }; });

  auto* gtc = gt->add_subcommand("decode", "Recover the defective set from pool outcomes");
  static std::string gtc_design, gtc_outcomes, gtc_out = "-";
  gtc->add_option("--design", gtc_design, "Design file from `gt design`")->required();
  gtc->add_option("--outcomes", gtc_outcomes, "Outcome file from `gt simulate` (- for stdin)")
      ->required();
  gtc->add_option("-o,--out", gtc_out, "Output file (default: stdout)");
  gtc->callback([] { action = [] { return run_gt_decode(gtc_design, gtc_outcomes, gtc_out); }; });

  // ---- sep ------------------------------------------------------------
  auto* sep = app.add_subcommand("sep", "Separating hash families [n] -> [t+1]");
  sep->require_subcommand(1);

  auto* sepb = sep->add_subcommand("build", "Build an (n,t,k)-separating family");
  static u64 sep_n = 0;
  static u32 sep_t = 0, sep_k = 0;
  static std::string sep_out;
  sepb->add_option("-n,--columns", sep_n, "Domain size")->required();
  sepb->add_option("-t,--isolate", sep_t, "Size of the set mapped onto [t]")->required();
  sepb->add_option("-k,--involved", sep_k, "Upper bound on |C| + |D| across separated pairs")
      ->required();
  sepb->add_option("-o,--out", sep_out, "Output file (sidecar: <out>.json)")->required();
  sepb->callback([] { action = [] { return run_sep_build(sep_n, sep_t, sep_k, sep_out); }; });

  auto* sepv = sep->add_subcommand("verify", "Exhaustively check a separating-family file");
  static std::string sepv_path;
  sepv->add_option("file", sepv_path, "File written by `sep build`")->required();
  sepv->callback([] { action = [] { return run_sep_verify(sepv_path); }; });

  // ---- parse & dispatch ------------------------------------------------
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const cffkit::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cffkit::VerificationFailed& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const cffkit::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 3;
  }
}
