#pragma once

#include <optional>
#include <vector>

#include "cffkit/bit_family.hpp"
#include "cffkit/fn_family.hpp"
#include "cffkit/report.hpp"
#include "cffkit/witness.hpp"

namespace cffkit {

/// (n,(t,k))-separating family of functions [n] -> [t+1]: for every pair of
/// disjoint C, D with |C| = t and |D| <= k-t, some member maps C onto [t]
/// bijectively and everything in D to t+1. Built in three stages: a
/// k-perfect hash into a quadratic-size range, a row filter choosing which
/// hash values pass, and a t-perfect compression onto [t]. Member index =
/// (f2_idx * |f1| + f1_idx) * |f0| + f0_idx.
struct SeparatingFamily {
    u64 n = 0;
    u32 t = 0, k = 0;
    FnFamily f0;   // [n] -> [q0]
    CffFamily f1;  // binary rows over [q0]
    FnFamily f2;   // [q0] -> [t]
    u128 count = 0;
    StageNode stage;

    /// Value in [1..t+1].
    u32 at(u128 member, u64 x) const;
};

SeparatingFamily build_min_separating(u64 n, u32 t, u32 k);

std::optional<Witness> verify_min_separating(const SeparatingFamily& h);

/// Same exhaustive check against a plain value table (row-major members).
std::optional<Witness> verify_separating_values(const std::vector<std::vector<u32>>& rows, u64 n,
                                                u32 t, u32 k);

/// Multiset over [n] with multiplicities 0..r.
struct RMultiset {
    u32 r = 0;
    std::vector<u32> v;

    u64 size() const;
    RMultiset complement() const;  // r - v_i coordinatewise
};

/// F separates (A,B) when A <= F <= complement(B) coordinatewise; the family
/// must cover every compatible pair: A+B <= r coordinatewise and |A+B| = k.
std::optional<Witness> verify_multiset_separator(const std::vector<RMultiset>& fam, u64 n, u32 r,
                                                 u32 k);

/// {F_{h,v}} with F(x) = v_{h(x)} for h(x) <= t and a default level for
/// h(x) = t+1, the default swept over 0..r until the exhaustive check
/// passes (VerificationFailed if none works). Requires h.t == floor(2k/r).
/// Cardinality exactly |h| * (r+1)^t; member index = h_idx * (r+1)^t +
/// v_rank (first v coordinate the most significant digit).
std::vector<RMultiset> lift_to_multiset_separator(const SeparatingFamily& h, u32 r, u32 k);

}  // namespace cffkit
