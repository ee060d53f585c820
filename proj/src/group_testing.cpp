#include "cffkit/group_testing.hpp"

#include <algorithm>

#include "cffkit/cff_build.hpp"

namespace cffkit {

PoolingDesign design_tests(u64 n, u32 s) {
    if (s == 0 || u64(s) >= n)
        throw InvalidParams("design_tests: need 1 <= s < n");
    CffBuild b = build_cff(n, 1, s);
    if (!b.family.materialized())
        throw CapacityError("design_tests: design exceeds the materialization cap");
    PoolingDesign d;
    d.n = n;
    d.s = s;
    d.tests = b.family.dense();
    d.report = std::move(b.report);
    return d;
}

PoolingDecoder::PoolingDecoder(const BitFamily& tests)
    : n_(tests.n()), rows_(tests.rows()), words_((tests.rows() + 63) / 64) {
    cols_.assign(n_ * words_, 0);
    for (u64 row = 0; row < rows_; ++row)
        for (u32 c = 0; c < n_; ++c)
            if (tests.bit(row, c)) cols_[c * words_ + row / 64] |= u64(1) << (row % 64);
}

std::vector<u64> PoolingDecoder::outcome_words(const std::vector<u64>& defectives) const {
    std::vector<u64> pos(words_, 0);
    for (u64 item : defectives) {
        if (item == 0 || item > n_) throw InvalidParams("simulate: item index out of range");
        const u64* col = cols_.data() + (item - 1) * words_;
        for (u64 w = 0; w < words_; ++w) pos[w] |= col[w];
    }
    return pos;
}

std::vector<u64> PoolingDecoder::items_within(const std::vector<u64>& positive) const {
    std::vector<u64> out;
    for (u64 item = 0; item < n_; ++item) {
        const u64* col = cols_.data() + item * words_;
        bool inside = true;
        for (u64 w = 0; w < words_ && inside; ++w) inside = (col[w] & ~positive[w]) == 0;
        if (inside) out.push_back(item + 1);
    }
    return out;
}

std::vector<u8> PoolingDecoder::simulate(const std::vector<u64>& defectives) const {
    const std::vector<u64> pos = outcome_words(defectives);
    std::vector<u8> outcome(rows_, 0);
    for (u64 row = 0; row < rows_; ++row) outcome[row] = u8((pos[row / 64] >> (row % 64)) & 1);
    return outcome;
}

std::vector<u64> PoolingDecoder::decode(const std::vector<u8>& outcome) const {
    if (outcome.size() != rows_) throw InvalidParams("decode: outcome length mismatch");
    std::vector<u64> pos(words_, 0);
    for (u64 row = 0; row < rows_; ++row)
        if (outcome[row]) pos[row / 64] |= u64(1) << (row % 64);
    return items_within(pos);
}

std::vector<u64> PoolingDecoder::roundtrip(const std::vector<u64>& defectives) const {
    return items_within(outcome_words(defectives));
}

std::vector<u8> simulate(const BitFamily& tests, const std::vector<u64>& defectives) {
    return PoolingDecoder(tests).simulate(defectives);
}

std::vector<u64> decode(const BitFamily& tests, const std::vector<u8>& outcome) {
    return PoolingDecoder(tests).decode(outcome);
}

}  // namespace cffkit
