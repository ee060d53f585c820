#include "cffkit/verify.hpp"

#include <bit>

#include "cffkit/numeric.hpp"

namespace cffkit {

namespace {

// Column-major copy of the family: per column, one bit per row.
struct ColumnBits {
    u64 words = 0;
    std::vector<std::vector<u64>> cols;
    u64 tail_mask = ~u64(0);

    explicit ColumnBits(const BitFamily& f) {
        words = (f.rows() + 63) / 64;
        cols.assign(f.n(), std::vector<u64>(words, 0));
        for (u64 r = 0; r < f.rows(); ++r) {
            const u64* rw = f.row_words(r);
            for (u32 c = 0; c < f.n(); ++c)
                if ((rw[c / 64] >> (c % 64)) & 1) cols[c][r / 64] |= u64(1) << (r % 64);
        }
        if (f.rows() % 64) tail_mask = (u64(1) << (f.rows() % 64)) - 1;
    }

    // First row matching: 1 on all of `ones`, 0 on all of `zeros`. -1 if none.
    long long find_row(const std::vector<u32>& ones, const std::vector<u32>& zeros) const {
        for (u64 w = 0; w < words; ++w) {
            u64 acc = (w + 1 == words) ? tail_mask : ~u64(0);
            for (u32 c : ones) {
                acc &= cols[c][w];
                if (!acc) break;
            }
            if (!acc) continue;
            for (u32 c : zeros) {
                acc &= ~cols[c][w];
                if (!acc) break;
            }
            if (acc) return (long long)(w * 64 + std::countr_zero(acc));
        }
        return -1;
    }
};

u64 next_popcount_mask(u64 mask) {
    // Gosper's hack: next larger integer with the same popcount.
    u64 c = mask & -mask;
    u64 r = mask + c;
    return (((r ^ mask) >> 2) / c) | r;
}

}  // namespace

std::optional<Witness> verify_cff(const BitFamily& family, u32 r, u32 s) {
    const u32 n = family.n();
    const u32 d = r + s;
    if (r == 0 || s == 0) throw InvalidParams("verify_cff: r and s must be positive");
    if (d > n) throw InvalidParams("verify_cff: r+s exceeds column count");
    if (d > 63) throw InvalidParams("verify_cff: r+s above 63 is not enumerable");
    if (family.rows() == 0) throw InvalidParams("verify_cff: empty family");

    ColumnBits cb(family);
    const u64 mask_end = u64(1) << d;

    std::vector<u32> subset(d);
    for (u32 i = 0; i < d; ++i) subset[i] = i;
    std::vector<u32> ones, zeros;
    ones.reserve(d);
    zeros.reserve(d);
    do {
        for (u64 mask = (u64(1) << r) - 1; mask < mask_end; mask = next_popcount_mask(mask)) {
            ones.clear();
            zeros.clear();
            for (u32 j = 0; j < d; ++j)
                ((mask >> j) & 1 ? ones : zeros).push_back(subset[j]);
            if (cb.find_row(ones, zeros) < 0) {
                Witness w;
                w.kind = "cff";
                for (u32 c : subset) w.index_set.push_back(u64(c) + 1);
                w.pattern_mask = mask;
                w.pattern_width = d;
                return w;
            }
        }
    } while (next_combination(subset, n));
    return std::nullopt;
}

bool replay_cff_witness(const BitFamily& family, const Witness& w) {
    if (w.kind != "cff" || w.index_set.size() != w.pattern_width)
        throw InvalidParams("replay_cff_witness: malformed witness");
    for (u64 row = 0; row < family.rows(); ++row) {
        bool match = true;
        for (u32 j = 0; j < w.pattern_width && match; ++j) {
            const u32 col = u32(w.index_set[j] - 1);
            match = family.bit(row, col) == bool((w.pattern_mask >> j) & 1);
        }
        if (match) return false;  // realized: failure not reproduced
    }
    return true;
}

BitFamily complement_family(const BitFamily& family) { return family.complemented(); }

BitFamily restrict_columns(const BitFamily& family, u32 m) { return family.restricted(m); }

}  // namespace cffkit
