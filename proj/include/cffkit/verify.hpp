#pragma once

#include <optional>

#include "cffkit/bit_family.hpp"
#include "cffkit/witness.hpp"

namespace cffkit {

/// Exhaustive check of the cover-free property: for every choice of d = r+s
/// columns and every way to mark r of them, some row is 1 exactly on the
/// marked columns within that window. Returns the first failure in
/// lexicographic subset order (patterns in ascending mask order), or nullopt.
///
/// Cost is Theta(C(n,d) * C(d,r) * rows) bit-window checks in the worst case;
/// realized patterns cut out early via 64-row word steps.
std::optional<Witness> verify_cff(const BitFamily& family, u32 r, u32 s);

/// True iff the witness still names a missing (columns, pattern) obligation.
bool replay_cff_witness(const BitFamily& family, const Witness& w);

/// Swapping 0s and 1s swaps the roles of r and s.
BitFamily complement_family(const BitFamily& family);

/// Any (n,(r,s)) family restricted to its first m >= r+s columns keeps the
/// property; this is plain column truncation.
BitFamily restrict_columns(const BitFamily& family, u32 m);

}  // namespace cffkit
