#pragma once

#include "cffkit/bit_family.hpp"

namespace cffkit {

constexpr u64 kSamplerSeed = 0x5eedcff0;

/// Randomized alternative to the constructive builders, for calibration and
/// verifier sanity checks only: i.i.d. rows with ones density r/(r+s), grown
/// in doubling batches until the exhaustive verifier accepts the whole
/// accumulated family. Deterministic for fixed arguments; CapacityError once
/// max_rows have been drawn without success.
BitFamily sample_cff(u64 n, u32 r, u32 s, u64 seed = kSamplerSeed, u64 max_rows = u64(1) << 20);

}  // namespace cffkit
