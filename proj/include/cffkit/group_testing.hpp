#pragma once

#include <vector>

#include "cffkit/bit_family.hpp"
#include "cffkit/report.hpp"

namespace cffkit {

/// Non-adaptive pooling design for up to s defectives among n items: one pool
/// per row of a (1,s)-cover-free family. Any item outside a defective set of
/// size <= s appears in some pool that set leaves negative, so decoding is
/// exact; for s+1 defectives the decoder still never drops a defective.
struct PoolingDesign {
    u64 n = 0;
    u32 s = 0;
    BitFamily tests;
    SizeReport report;
};

PoolingDesign design_tests(u64 n, u32 s);

/// Pool outcomes under noiseless OR: outcome[j] = 1 iff pool j contains a
/// defective. `defectives` holds 1-based item indices.
std::vector<u8> simulate(const BitFamily& tests, const std::vector<u64>& defectives);

/// Items contained only in positive pools, 1-based and ascending. Equals the
/// defective set exactly when its size is <= s; a superset at s+1.
std::vector<u64> decode(const BitFamily& tests, const std::vector<u8>& outcome);

/// Column-cached variant for repeated simulate/decode rounds against one
/// design.
class PoolingDecoder {
public:
    explicit PoolingDecoder(const BitFamily& tests);

    u64 items() const { return n_; }
    u64 pools() const { return rows_; }

    std::vector<u8> simulate(const std::vector<u64>& defectives) const;
    std::vector<u64> decode(const std::vector<u8>& outcome) const;

    /// decode(simulate(defectives)) without materializing the outcome vector.
    std::vector<u64> roundtrip(const std::vector<u64>& defectives) const;

private:
    std::vector<u64> outcome_words(const std::vector<u64>& defectives) const;
    std::vector<u64> items_within(const std::vector<u64>& positive) const;

    u64 n_ = 0, rows_ = 0, words_ = 0;
    std::vector<u64> cols_;  // column-major bitsets over pools
};

}  // namespace cffkit
