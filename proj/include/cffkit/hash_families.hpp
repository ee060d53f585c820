#pragma once

#include <optional>

#include "cffkit/bit_family.hpp"
#include "cffkit/fn_family.hpp"
#include "cffkit/report.hpp"
#include "cffkit/witness.hpp"

namespace cffkit {

/// Exact fraction with 128-bit terms (always kept reduced).
struct Rational {
    u128 num = 0;
    u128 den = 1;
    void reduce();
    double value() const { return double(num) / double(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool less_than(u64 a, u64 b) const { return num * b < den * a; }  // this < a/b
};

/// d-perfect hash family [n] -> [q]: every d-subset is mapped injectively by
/// some member. q must be a prime power with q > 4*(d*(d-1)/2 + 1); `relaxed`
/// skips that threshold and emits the full q-member evaluation family (unit
/// tests exercise small fields this way). Size: one member per needed
/// evaluation point; one level of self-composition covers n beyond q^m.
FnFamily build_phf(u64 n, u64 q, u32 d, bool relaxed = false, StageNode* stage = nullptr);

std::optional<Witness> verify_phf(const FnFamily& h, u32 d);

/// (1-eps)-dense separating family [n] -> [q]: for every pair of disjoint
/// subsets of sizes (rho1, rho2), at least (1-eps)|H| members map them to
/// disjoint value sets. Requires eps > 4*(rho1*rho2 + 1)/q.
FnFamily build_dense_shf(u64 n, u64 q, u32 rho1, u32 rho2, u64 eps_num = 1, u64 eps_den = 2,
                         StageNode* stage = nullptr);

/// Exact minimum over all disjoint (rho1, rho2) pairs of the separating
/// member fraction.
Rational shf_min_density(const FnFamily& h, u32 rho1, u32 rho2);

/// Composition with a binary family on the range: member (outer_i, inner_i)
/// has bit x = inner row bit at position outer(x). Lazy when the product
/// would exceed the cap.
CffFamily compose_with_rows(const FnFamily& outer, const CffFamily& inner);

/// t-perfect hash into the smallest admissible prime-power range (about
/// 2*t^2). Returns the family; records the chosen field size in `stage`.
FnFamily build_perfect_hash_quadratic(u64 n, u32 t, StageNode* stage = nullptr);

/// t-perfect compression onto exactly [t], built greedily: each pick covers
/// at least a t!/t^t fraction of the still-uncovered t-subsets, so the size
/// is at most ceil(ln C(m,t) / -ln(1 - t!/t^t)) + 1.
FnFamily build_perfect_hash_compress(u64 m, u32 t, StageNode* stage = nullptr);

}  // namespace cffkit
