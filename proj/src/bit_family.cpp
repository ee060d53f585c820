#include "cffkit/bit_family.hpp"

#include <cstring>

namespace cffkit {

std::string BitFamily::row_string(u64 row) const {
    std::string s(n_, '0');
    for (u32 c = 0; c < n_; ++c)
        if (bit(row, c)) s[c] = '1';
    return s;
}

void BitFamily::append_row_string(const std::string& s) {
    if (s.size() != n_) throw InvalidParams("append_row_string: wrong length");
    append_row_zero();
    for (u32 c = 0; c < n_; ++c) {
        if (s[c] == '1')
            set_bit(rows_ - 1, c);
        else if (s[c] != '0')
            throw InvalidParams("append_row_string: character outside {0,1}");
    }
}

bool BitFamily::rows_equal(u64 a, u64 b) const {
    return std::memcmp(row_words(a), row_words(b), wpr_ * sizeof(u64)) == 0;
}

BitFamily BitFamily::complemented() const {
    BitFamily out(n_);
    const u64 tail = (n_ % 64) ? ((u64(1) << (n_ % 64)) - 1) : ~u64(0);
    for (u64 r = 0; r < rows_; ++r) {
        out.append_row_zero();
        u64* dst = out.row_words(r);
        const u64* src = row_words(r);
        for (u32 w = 0; w < wpr_; ++w) dst[w] = ~src[w];
        if (wpr_) dst[wpr_ - 1] &= tail;
    }
    return out;
}

BitFamily BitFamily::restricted(u32 m) const {
    if (m > n_) throw InvalidParams("restricted: m exceeds column count");
    BitFamily out(m);
    for (u64 r = 0; r < rows_; ++r) {
        out.append_row_zero();
        u64* dst = out.row_words(r);
        const u64* src = row_words(r);
        for (u32 w = 0; w < out.words_per_row(); ++w) dst[w] = src[w];
        const u64 tail = (m % 64) ? ((u64(1) << (m % 64)) - 1) : ~u64(0);
        if (out.words_per_row()) dst[out.words_per_row() - 1] &= tail;
    }
    return out;
}

void BitRowEvaluator::fill_row(u128 member, u64* words, u32 n) const {
    for (u32 w = 0; w < (n + 63) / 64; ++w) words[w] = 0;
    for (u32 c = 0; c < n; ++c)
        if (bit(member, c)) words[c / 64] |= u64(1) << (c % 64);
}

const BitFamily& CffFamily::dense() const {
    if (!dense_) throw CapacityError("CffFamily: family is lazy; materialize() first");
    return *dense_;
}

bool CffFamily::bit(u128 member, u32 col) const {
    if (member >= count_) throw InvalidParams("CffFamily::bit: member out of range");
    if (dense_) return dense_->bit(u64(member), col);
    return eval_->bit(member, col);
}

BitFamily CffFamily::materialize(u64 cap) const {
    if (dense_) return *dense_;
    if (cap == 0) cap = materialization_cap();
    if (count_ > cap)
        throw CapacityError("CffFamily::materialize: " + to_string_u128(count_) +
                            " rows exceed cap " + std::to_string(cap));
    BitFamily out(n_);
    for (u128 m = 0; m < count_; ++m) {
        out.append_row_zero();
        eval_->fill_row(m, out.row_words(u64(m)), n_);
    }
    return out;
}

}  // namespace cffkit
