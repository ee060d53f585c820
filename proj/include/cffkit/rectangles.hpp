#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cffkit/common.hpp"

namespace cffkit {

/// Product set R_1 x ... x R_k inside [t]^k, one value subset per axis.
/// Values are 1-based.
struct Rectangle {
    std::vector<std::vector<u32>> sides;
};

/// Points of [t]^k meant to intersect every rectangle of the configured
/// sidewise density. Only "exact-product" mode carries that guarantee;
/// "heuristic-random" output is a deterministic seeded sample whose soundness
/// must be re-established by whatever consumes it.
struct PointSet {
    u64 t = 0;
    u64 k = 0;
    std::string mode;                      // "exact-product" | "heuristic-random"
    std::vector<std::vector<u32>> points;  // each of length k, coordinates in [1..t]
};

constexpr u64 kHittingSetSeed = 0x5eed0a11;

/// exact-product: all of [t]^k in lexicographic order (sound for every gamma;
/// capacity-capped). heuristic-random: ceil(3 * (1/gamma)^k * (k*log2(t) +
/// log2(100))) points from a fixed-seed generator, never certified.
PointSet build_hitting_set(u64 t, u64 k, double gamma, const std::string& mode,
                           u64 seed = kHittingSetSeed);

/// Index of the first listed rectangle containing no point of h, if any.
std::optional<u64> verify_hitting_set(const PointSet& h, const std::vector<Rectangle>& rectangles);

}  // namespace cffkit
