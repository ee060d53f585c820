#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cffkit/common.hpp"

namespace cffkit {

/// Counterexample reported by a verifier. Which fields are populated depends
/// on `kind`; every verifier documents its own layout. Columns and values are
/// 1-based in witnesses, matching the serialized formats.
struct Witness {
    std::string kind;               // "cff", "phf", "splitter", "shf", "mcff", ...
    std::vector<u64> index_set;     // offending columns/points, sorted ascending
    u64 pattern_mask = 0;           // cff: bit j set <=> position j of index_set must be 1
    u32 pattern_width = 0;          // cff: number of positions (= d)
    std::vector<u64> second_set;    // shf/minsep: the second set of the pair
    std::vector<std::pair<std::vector<u64>, std::vector<u64>>> blocks;  // mcff: per-block pairs
    std::string detail;             // free-form context (never parsed)

    /// Pattern as a left-to-right bitstring over the sorted index set.
    std::string pattern_string() const;
    std::string to_string() const;
};

/// Thrown by builders that gate their output on verification (and only those).
struct VerificationFailed : std::runtime_error {
    Witness witness;
    explicit VerificationFailed(Witness w)
        : std::runtime_error("verification failed: " + w.to_string()), witness(std::move(w)) {}
};

}  // namespace cffkit
