#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cffkit/bit_family.hpp"
#include "cffkit/fn_family.hpp"
#include "cffkit/rectangles.hpp"
#include "cffkit/report.hpp"
#include "cffkit/witness.hpp"

namespace cffkit {

/// Ordered ways to write d as a sum of k parts, every part >= lo, in
/// lexicographic order. These are the possible per-bucket counts of a
/// d-subset once a splitter has placed at least lo of its elements in each
/// bucket.
struct CompositionList {
    u32 d = 0, k = 0, lo = 0;

    CompositionList(u32 d_, u32 k_, u32 lo_);

    /// C(d - k*lo + k - 1, k - 1); zero when k*lo > d.
    u128 count() const;
    /// (lo, ..., lo, d - (k-1)*lo).
    std::vector<u32> first() const;
    /// Advance to the lexicographic successor; false past the last one.
    bool next(std::vector<u32>& comp) const;
    /// Every composition, capped (CapacityError beyond `cap`).
    std::vector<std::vector<u32>> all(u64 cap = u64(1) << 20) const;
};

/// One column block of a multi-pattern family: patterns carry rho1 ones and
/// rho2 zeros inside this block. q = 0 asks the builder for the canonical
/// alphabet, the smallest prime power in (24*rho1*rho2, 48*rho1*rho2].
struct McffBlock {
    u32 rho1 = 0, rho2 = 0;
    u64 q = 0;
};

struct MultiCffSpec {
    std::vector<McffBlock> blocks;
};

/// Decoded member of a multi-block family: per block, the hash member it
/// uses plus the membership mask of its value subset.
struct McffMember {
    std::vector<u32> g;                 // 0-based member index into hashes[b]
    std::vector<std::vector<u8>> in_r;  // per block, membership over [q_b]
};

/// Family of k-tuples of binary rows over a shared domain of n points: member
/// (g, R_1..R_k) gives block b the row x -> [h_{b,g_b}(x) in R_b]. For every
/// choice of one (rho1, rho2)-pattern per block, some member realizes all of
/// them simultaneously. Member index = g_idx * prod C(q_b, rho1_b) + subset
/// ranks in mixed radix (block k-1 fastest, lexicographic subset ranks).
struct McffFamily {
    u64 n = 0;
    std::vector<McffBlock> blocks;   // q resolved
    std::vector<FnFamily> hashes;    // per block; count = hash_periods[b] <= selector arity
    std::vector<u64> hash_periods;   // selector coordinate g picks member (g-1) % period
    PointSet selector;               // over [T]^k, T = max needed member count
    std::vector<u128> subset_counts; // C(q_b, rho1_b)
    u128 count = 0;                  // |selector| * prod subset_counts
    StageNode stage;

    u32 block_count() const { return u32(blocks.size()); }
    McffMember decode(u128 member) const;
    bool bit(const McffMember& mem, u32 block, u64 point) const;
    bool bit(u128 member, u32 block, u64 point) const;
};

/// selector_mode: "exact-product" (sound unconditionally) or
/// "heuristic-random" (accepted only after verify_mcff passes).
McffFamily build_mcff(u64 n, const MultiCffSpec& spec,
                      const std::string& selector_mode = "exact-product",
                      u64 seed = kHittingSetSeed, StageNode* stage = nullptr);

/// Exhaustive check over every tuple of per-block patterns. Returns the
/// first uncovered tuple as a witness (blocks field), or nothing.
std::optional<Witness> verify_mcff(const McffFamily& f);

/// (r,s)-cover-free family over n columns: every d = r+s columns and every
/// split of them into r ones and s zeros is realized by some row. Built from
/// one separating-hash stage into the smallest prime power in (24rs, 48rs]
/// and all r-subsets of that range; member (h, R) has bit_x = [h(x) in R],
/// index = h_idx * C(q_b, r) + subset rank.
CffFamily build_base_cff(u64 n, u32 r, u32 s, StageNode* stage = nullptr);

/// Field-and-splitter construction (requires r <= s, 1 <= k <= r): hash the
/// columns d-perfectly into a field of size q in (d^3, 2*d^3], split the
/// hashed ones evenly into k' buckets (k' the largest divisor of r up to k),
/// and cover each bucket with a base-family slice per feasible bucket load.
CffFamily build_cff_construction1(u64 n, u32 r, u32 s, u32 k, StageNode* stage = nullptr);

/// Same outer skeleton, but the per-bucket slices are replaced by one
/// multi-block family per (composition, load vector), sharing a selector
/// across buckets instead of taking a full product of per-bucket members.
CffFamily build_cff_construction2(u64 n, u32 r, u32 s, u32 k, StageNode* stage = nullptr);

struct BuildOptions {
    u32 k = 0;           // bucket count; 0 picks the regime's canonical value
    std::string regime;  // "", "base", "construction1", "construction2"
    double phi = 0.0;    // override for the bucket-count divisor (0 = formula)
    bool materialize = true;  // tabulate the final family when within cap
};

struct CffBuild {
    CffFamily family;
    SizeReport report;
};

/// Regime dispatch. With r > s the (s,r) family is built and complemented
/// ("complement+..." regime). Among the direct regimes: small r goes to the
/// base construction, large r (>= d / ceil(log2 d)^2) to construction 2 with
/// k ~ r / max(1, ceil(log2 log2 d)), the middle band to construction 1 with
/// k ~ r / max(1, log2 log2 d).
CffBuild build_cff(u64 n, u32 r, u32 s, const BuildOptions& opt = {});

}  // namespace cffkit
