#include "cffkit/splitters.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "cffkit/hash_families.hpp"
#include "cffkit/numeric.hpp"

namespace cffkit {

namespace {

// Candidates examined per greedy round before settling for the best seen so
// far; the scan runs past the window only while every gain was zero.
constexpr u64 kScanWindow = 20000;
constexpr u64 kSubsetCap = u64(1) << 20;

u64 smallest_prime_at_least(u64 m) {
    u64 p = std::max<u64>(2, m);
    while (!is_prime(p)) ++p;
    return p;
}

/// Smallest prime power that is both at least r*r and admissible as the range
/// of an r-perfect hash (q > 4*(r*(r-1)/2 + 1)).
u64 lift_alphabet(u64 r) {
    const u64 floor_val = std::max(r * r, 4 * (r * (r - 1) / 2 + 1) + 1);
    return is_prime_power(floor_val) ? floor_val : next_prime_power_above(floor_val);
}

}  // namespace

double z_real(double r, double k) { return 16.0 * r * std::log2(k) / (k * std::log2(4.0 * r / k)); }

double sigma_log2_real(double r, double k) {
    return 0.5 * k * std::log2(2.0 * std::numbers::pi * r / k) +
           (k * k / (12.0 * r)) * std::numbers::log2e;
}

SplitterParams splitter_params(u64 r, u64 k) {
    if (r == 0 || k == 0 || k > r) throw InvalidParams("splitter_params: need 1 <= k <= r");
    SplitterParams p;
    p.r = r;
    p.k = k;
    p.sigma_log2 = sigma_log2_real(double(r), double(k));
    p.sigma = std::exp2(p.sigma_log2);
    p.z = z_real(double(r), double(k));
    p.k_eff = largest_divisor_le(r, k);
    p.z_eff = std::max<u64>(1, nearest_divisor(p.k_eff, z_real(double(r), double(p.k_eff))));
    return p;
}

FnFamily build_splitter_base(u64 m, u64 r, u64 k, StageNode* stage) {
    if (r == 0 || k == 0) throw InvalidParams("build_splitter_base: parameters must be positive");
    if (k > r || r > m) throw InvalidParams("build_splitter_base: need k <= r <= m");
    if (k == 1) {
        FnFamily out = make_constant_family(m, 1, 1);
        if (stage) {
            stage->name = "splitter_base";
            stage->count = 1;
            stage->param("m", u128(m));
            stage->param("r", u128(r));
            stage->param("k", u128(k));
            stage->param("mode", "constant");
        }
        return out;
    }
    if (m > 64) throw CapacityError("build_splitter_base: domain above 64 points");
    if (binomial_u128(m, r) > kSubsetCap)
        throw CapacityError("build_splitter_base: C(m,r) exceeds 2^20 subsets");

    const u64 p = smallest_prime_at_least(m);
    const u128 cand_total = checked_pow(p, u32(r), "build_splitter_base");
    const u32 lb = u32(r / k), ub = u32((r + k - 1) / k);

    // Every r-subset of the domain, as a 64-bit mask.
    std::vector<u64> uncovered;
    {
        std::vector<u32> sub(r);
        for (u64 i = 0; i < r; ++i) sub[i] = u32(i);
        do {
            u64 mask = 0;
            for (u32 x : sub) mask |= u64(1) << x;
            uncovered.push_back(mask);
        } while (next_combination(sub, m));
    }

    // Candidate c encodes the coefficients of a degree-(r-1) polynomial over
    // GF(p), constant term in the lowest digit; values are folded onto [k] by
    // balanced intervals. The pool interpolates any target assignment on any
    // r points, so each round always has a candidate of positive gain.
    std::vector<u64> coef(r);
    std::vector<u8> bucket_of(m);
    auto load_candidate = [&](u128 c) {
        for (u64 i = 0; i < r; ++i) {
            coef[i] = u64(c % p);
            c /= p;
        }
        for (u64 x = 0; x < m; ++x) {
            u64 v = 0;
            for (u64 i = r; i-- > 0;) v = (v * x + coef[i]) % p;
            bucket_of[x] = u8(v * k / p + 1);
        }
    };
    auto splits = [&](u64 mask) {
        u8 load[65] = {};
        for (u64 t = mask; t;) {
            const int x = std::countr_zero(t);
            t &= t - 1;
            if (++load[bucket_of[x]] > ub) return false;
        }
        for (u64 j = 1; j <= k; ++j)
            if (load[j] < lb) return false;
        return true;
    };

    std::vector<u32> table;
    u64 members = 0;
    while (!uncovered.empty()) {
        u128 best_c = 0;
        size_t best_gain = 0;
        for (u128 c = 0; c < cand_total; ++c) {
            load_candidate(c);
            size_t gain = 0;
            for (u64 mask : uncovered) gain += splits(mask) ? 1 : 0;
            if (gain > best_gain) {
                best_gain = gain;
                best_c = c;
            }
            if (best_gain > 0 && c + 1 >= kScanWindow) break;
        }
        if (best_gain == 0)
            throw CapacityError("build_splitter_base: greedy made no progress");
        load_candidate(best_c);
        std::erase_if(uncovered, [&](u64 mask) { return splits(mask); });
        for (u64 x = 0; x < m; ++x) table.push_back(bucket_of[x]);
        ++members;
    }

    FnFamily out = FnFamily::from_table(m, k, std::move(table), "splitter_base");
    if (auto w = verify_splitter(out, r, k)) throw VerificationFailed(*w);
    if (stage) {
        stage->name = "splitter_base";
        stage->count = members;
        stage->param("m", u128(m));
        stage->param("r", u128(r));
        stage->param("k", u128(k));
        stage->param("field", u128(p));
    }
    return out;
}

std::optional<Witness> verify_splitter(const FnFamily& h, u64 r, u64 k) {
    if (r == 0 || k == 0) throw InvalidParams("verify_splitter: parameters must be positive");
    if (r > h.n()) throw InvalidParams("verify_splitter: r exceeds the domain size");
    if (h.count() == 0) throw InvalidParams("verify_splitter: empty family");
    if (h.count() > (u128(1) << 40))
        throw CapacityError("verify_splitter: family too large for an exhaustive scan");

    const u32 lb = u32(r / k), ub = u32((r + k - 1) / k);
    std::vector<u32> load(k + 1);
    std::vector<u32> sub(r);
    for (u64 i = 0; i < r; ++i) sub[i] = u32(i);
    do {
        bool split = false;
        for (u128 i = 0; i < h.count() && !split; ++i) {
            std::fill(load.begin(), load.end(), 0);
            bool in_range = true;
            for (u32 x : sub) {
                const u32 v = h.at(i, x);
                if (v > k) {
                    in_range = false;
                    break;
                }
                ++load[v];
            }
            if (!in_range) continue;
            split = true;
            for (u64 j = 1; j <= k && split; ++j) split = load[j] == lb || load[j] == ub;
        }
        if (!split) {
            Witness w;
            w.kind = "splitter";
            for (u32 x : sub) w.index_set.push_back(u64(x) + 1);
            w.detail = "no member has every bucket load in {" + std::to_string(lb) + "," +
                       std::to_string(ub) + "} on these points";
            return w;
        }
    } while (next_combination(sub, h.n()));
    return std::nullopt;
}

FnFamily build_splitter(u64 n, u64 r, u64 k, StageNode* stage) {
    if (n == 0 || r == 0 || k == 0) throw InvalidParams("build_splitter: parameters must be positive");
    if (k > r) throw InvalidParams("build_splitter: need k <= r");
    if (r > n) throw InvalidParams("build_splitter: need r <= n");
    const SplitterParams sp = splitter_params(r, k);

    auto head = [&](const FnFamily& out) {
        if (!stage) return;
        stage->name = "splitter";
        stage->count = out.count();
        stage->param("n", u128(n));
        stage->param("r", u128(r));
        stage->param("k", u128(k));
        stage->param("k_eff", u128(sp.k_eff));
    };

    if (sp.k_eff == 1) {
        FnFamily out = make_constant_family(n, 1, 1);
        head(out);
        if (stage) stage->param("mode", "constant");
        return out;
    }

    if (r <= 4) {
        if (n <= 64 && binomial_u128(n, r) <= kSubsetCap) {
            StageNode base_stage;
            FnFamily out = build_splitter_base(n, r, sp.k_eff, &base_stage);
            head(out);
            if (stage) {
                stage->combine = "product";
                stage->children = {base_stage};
            }
            return out;
        }
        // Hash down to a small prime-power domain first, then split there.
        const u64 q0 = next_prime_power_above(4 * (r * (r - 1) / 2 + 1));
        StageNode phf_stage, base_stage;
        FnFamily outer = build_phf(n, q0, u32(r), false, &phf_stage);
        FnFamily base = build_splitter_base(q0, r, sp.k_eff, &base_stage);
        FnFamily out = compose_families(outer, base);
        head(out);
        if (stage) {
            stage->combine = "product";
            stage->children = {phf_stage, base_stage};
        }
        return out;
    }

    // Recursive pipeline: hash [n] into [M], cut [M] into z_eff intervals in
    // every possible way, and run an independent (r/z, k/z)-splitter per
    // interval with bucket offset (k_eff/z_eff)*interval.
    const u64 z = sp.z_eff;
    const u64 r0 = r / z, k0 = sp.k_eff / z;
    const u64 big_m = lift_alphabet(r);

    StageNode piece_stage;
    FnFamily piece;
    if (k0 == 1) {
        piece = make_constant_family(big_m, 1, 1);
        piece_stage.name = "piece";
        piece_stage.count = 1;
        piece_stage.param("mode", "constant");
    } else {
        const u64 mb = lift_alphabet(r0);
        StageNode lift_stage, base_stage;
        FnFamily lift = build_phf(big_m, mb, u32(r0), false, &lift_stage);
        FnFamily base = build_splitter_base(mb, r0, k0, &base_stage);
        piece = compose_families(lift, base);
        piece_stage.name = "piece";
        piece_stage.combine = "product";
        piece_stage.count = piece.count();
        piece_stage.children = {lift_stage, base_stage};
    }
    piece_stage.param("m", u128(big_m));
    piece_stage.param("r", u128(r0));
    piece_stage.param("k", u128(k0));

    FnFamily stitched = make_stitched_family(big_m, u32(z), k0, piece);

    StageNode cuts;
    cuts.name = "cuts";
    cuts.count = binomial_u128(big_m - 1, z - 1);
    cuts.param("m", u128(big_m));
    cuts.param("z", u128(z));

    StageNode pieces;
    pieces.name = "pieces";
    pieces.combine = "product";
    pieces.repeat = u32(z);
    pieces.count = checked_pow(piece.count(), u32(z), "build_splitter");
    pieces.children = {piece_stage};

    StageNode stitch_stage;
    stitch_stage.name = "stitched";
    stitch_stage.combine = "product";
    stitch_stage.count = stitched.count();
    stitch_stage.param("m", u128(big_m));
    stitch_stage.param("z", u128(z));
    stitch_stage.param("k_over_z", u128(k0));
    stitch_stage.children = {cuts, pieces};

    StageNode phf_stage;
    FnFamily outer = build_phf(n, big_m, u32(r), false, &phf_stage);
    FnFamily out = compose_families(outer, stitched);
    head(out);
    if (stage) {
        stage->combine = "product";
        stage->param("z_eff", u128(z));
        stage->param("r_piece", u128(r0));
        stage->param("k_piece", u128(k0));
        stage->children = {phf_stage, stitch_stage};
    }
    return out;
}

SplitterScalingReport splitter_scaling_report(u64 r, u64 k_ref, u32 samples) {
    if (r < 4) throw InvalidParams("splitter_scaling_report: need r >= 4");
    const double sqrt_r = std::sqrt(double(r));
    if (double(k_ref) < sqrt_r || k_ref > r)
        throw InvalidParams("splitter_scaling_report: need sqrt(r) <= k_ref <= r");
    if (samples < 2) throw InvalidParams("splitter_scaling_report: need at least 2 samples");

    SplitterScalingReport rep;
    rep.r = r;
    rep.k_ref = k_ref;
    rep.z_samples.reserve(samples);
    rep.z_strictly_decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (u32 i = 0; i < samples; ++i) {
        const double kk = sqrt_r * std::pow(double(r) / sqrt_r, double(i) / double(samples - 1));
        const double zz = z_real(double(r), kk);
        rep.z_samples.emplace_back(kk, zz);
        if (!(zz < prev)) rep.z_strictly_decreasing = false;
        prev = zz;
    }

    rep.z_at_sqrt = z_real(double(r), sqrt_r);
    rep.z_at_sqrt_closed = 16.0 * sqrt_r * std::log2(sqrt_r) / std::log2(4.0 * sqrt_r);
    rep.z_sqrt_ceiling = 16.0 * sqrt_r;
    rep.z_at_full = z_real(double(r), double(r));
    rep.z_at_full_closed = 8.0 * std::log2(double(r));

    const double zr = z_real(double(r), double(k_ref));
    const double r0 = double(r) / zr, k0 = double(k_ref) / zr;
    const double sig = sigma_log2_real(double(r), double(k_ref));
    if (r0 > 2.0) {
        rep.base_cost_log2_ratio = 0.5 * std::log2(r0) + sigma_log2_real(r0, k0) +
                                   4.0 * r0 * std::log2(r0) + std::log2(std::log2(r0)) - sig;
        const u64 z_int = std::max<u64>(2, u64(std::llround(zr)));
        rep.stitched_count_exponent =
            (log2_binomial(r * r, z_int - 1) +
             double(z_int) * (2.5 * std::log2(r0) + sigma_log2_real(r0, k0) +
                              std::log2(std::log2(r0)) + std::log2(std::log2(double(r)))) -
             sig) /
            (double(z_int) * std::log2(double(r)));
    } else {
        rep.base_cost_log2_ratio = std::numeric_limits<double>::quiet_NaN();
        rep.stitched_count_exponent = std::numeric_limits<double>::quiet_NaN();
    }
    rep.poly_vs_sigma_ratio = zr * std::log2(double(r)) / sig;
    return rep;
}

}  // namespace cffkit
