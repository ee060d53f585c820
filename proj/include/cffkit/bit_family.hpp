#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cffkit/common.hpp"

namespace cffkit {

/// Packed binary matrix: each row is one family member over n columns.
/// Rows are stored little-endian in 64-bit words, column 0 at bit 0.
class BitFamily {
public:
    BitFamily() = default;
    explicit BitFamily(u32 n) : n_(n), wpr_((n + 63) / 64) {}

    u32 n() const { return n_; }
    u64 rows() const { return rows_; }
    u32 words_per_row() const { return wpr_; }

    bool bit(u64 row, u32 col) const {
        const u64 w = bits_[row * wpr_ + col / 64];
        return (w >> (col % 64)) & 1;
    }

    void append_row_zero() {
        bits_.resize(bits_.size() + wpr_, 0);
        ++rows_;
    }
    void set_bit(u64 row, u32 col) { bits_[row * wpr_ + col / 64] |= u64(1) << (col % 64); }

    const u64* row_words(u64 row) const { return bits_.data() + row * wpr_; }
    u64* row_words(u64 row) { return bits_.data() + row * wpr_; }

    /// Rowwise 0/1 string, column 0 first.
    std::string row_string(u64 row) const;
    void append_row_string(const std::string& s);

    bool rows_equal(u64 a, u64 b) const;

    BitFamily complemented() const;
    /// Keep columns 0..m-1 of every row.
    BitFamily restricted(u32 m) const;

    bool operator==(const BitFamily& o) const {
        return n_ == o.n_ && rows_ == o.rows_ && bits_ == o.bits_;
    }

private:
    u32 n_ = 0;
    u32 wpr_ = 0;
    u64 rows_ = 0;
    std::vector<u64> bits_;
};

/// Pure row oracle for families too large to hold in memory.
class BitRowEvaluator {
public:
    virtual ~BitRowEvaluator() = default;
    virtual bool bit(u128 member, u32 col) const = 0;
    /// Fill a packed row; the default loops over bit(). Overridden where a
    /// member decomposition is worth doing once per row.
    virtual void fill_row(u128 member, u64* words, u32 n) const;
};

/// A cover-free family: either a materialized BitFamily or an exact-count
/// lazy evaluator. Column count and cardinality are always exact.
class CffFamily {
public:
    CffFamily() = default;
    explicit CffFamily(BitFamily dense)
        : n_(dense.n()), count_(dense.rows()),
          dense_(std::make_shared<BitFamily>(std::move(dense))) {}
    CffFamily(u32 n, u128 count, std::shared_ptr<const BitRowEvaluator> eval)
        : n_(n), count_(count), eval_(std::move(eval)) {}

    u32 n() const { return n_; }
    u128 count() const { return count_; }
    bool materialized() const { return dense_ != nullptr; }

    const BitFamily& dense() const;
    bool bit(u128 member, u32 col) const;

    /// Materialize up to `cap` rows (default: process-wide cap); throws
    /// CapacityError beyond it.
    BitFamily materialize(u64 cap = 0) const;

private:
    u32 n_ = 0;
    u128 count_ = 0;
    std::shared_ptr<const BitFamily> dense_;
    std::shared_ptr<const BitRowEvaluator> eval_;
};

}  // namespace cffkit
