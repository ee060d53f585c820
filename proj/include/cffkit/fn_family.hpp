#pragma once

#include <memory>
#include <vector>

#include <json.hpp>

#include "cffkit/common.hpp"

namespace cffkit {

/// Pure member oracle for function families too large to tabulate.
class FnEvaluator {
public:
    virtual ~FnEvaluator() = default;
    /// Value of member `member` at 0-based `point`, in [1..q].
    virtual u32 at(u128 member, u64 point) const = 0;
    /// Parameters sufficient to rebuild this evaluator bit-exactly.
    virtual nlohmann::json descriptor() const = 0;
};

/// Family of functions [n] -> [q] with exact cardinality. Either a flat value
/// table (member-major) or a lazy evaluator. Values are 1-based; points are
/// 0-based in the API and 1-based only in serialized text.
class FnFamily {
public:
    FnFamily() = default;

    static FnFamily from_table(u64 n, u64 q, std::vector<u32> values, std::string kind = "table");
    static FnFamily lazy(u64 n, u64 q, u128 count, std::shared_ptr<const FnEvaluator> eval,
                         std::string kind);

    u64 n() const { return n_; }
    u64 q() const { return q_; }
    u128 count() const { return count_; }
    const std::string& kind() const { return kind_; }
    bool materialized() const { return !values_.empty() || count_ == 0; }

    u32 at(u128 member, u64 point) const {
        if (!values_.empty()) return values_[size_t(u64(member) * n_ + point)];
        return eval_->at(member, point);
    }

    /// Tabulate (throws CapacityError past the cap).
    FnFamily materialize() const;
    nlohmann::json descriptor() const;

private:
    u64 n_ = 0, q_ = 0;
    u128 count_ = 0;
    std::string kind_;
    std::vector<u32> values_;  // count * n, member-major
    std::shared_ptr<const FnEvaluator> eval_;
};

FnFamily make_identity_family(u64 n, u64 q);
FnFamily make_constant_family(u64 n, u64 q, u32 value);

/// Polynomial-evaluation family: member a in {0..t-1} maps x to P_x(a)+1 where
/// P_x has the m base-q digits of x as coefficients over the order-q field.
/// Any two distinct points collide in at most m-1 of the t members.
FnFamily make_polynomial_family(u64 n, u64 q, u32 m, u64 t);

/// {inner_h ∘ outer_h}: member index = inner_idx * |outer| + outer_idx.
/// Result is lazy if either input is lazy or the table would exceed the cap.
FnFamily compose_families(const FnFamily& outer, const FnFamily& inner);

/// Piecewise-offset stitching: domain [m] is cut into z intervals by every
/// possible strictly increasing cut vector; interval t applies inner member
/// h_t and adds offset t*k_over_z. Member index = cut_rank * |inner|^z +
/// tuple_rank (piece 0 the most significant tuple digit).
FnFamily make_stitched_family(u64 m, u32 z, u64 k_over_z, const FnFamily& inner);

/// Rebuild a lazy family from its descriptor().
FnFamily family_from_descriptor(const nlohmann::json& j);

}  // namespace cffkit
