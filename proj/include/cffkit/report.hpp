#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cffkit/common.hpp"

namespace cffkit {

/// Problem instance (n columns, patterns with r ones and s zeros).
struct DesignParams {
    u64 n = 0;
    u32 r = 0, s = 0;
    u32 d() const { return r + s; }
    bool normalized() const { return r <= s; }
    DesignParams swapped() const { return {n, s, r}; }
};

/// One stage of a construction. `count` is the exact cardinality contributed
/// by this node; `combine` says how child counts roll up ("leaf", "product",
/// "sum"). The tree is the machine-readable account of how a family was put
/// together: every parameter both as requested and as actually used.
struct StageNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    u128 count = 0;
    std::string combine = "leaf";
    u32 repeat = 1;  // rolled-up child count is raised to this power (tuples of identical stages)
    std::vector<StageNode> children;

    void param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
    void param(const std::string& key, u128 value) { params.emplace_back(key, to_string_u128(value)); }

    /// Recompute count from the children according to `combine`.
    u128 recompute() const;
    /// True iff every node's count equals its recomputation.
    bool consistent() const;
    nlohmann::json to_json() const;
};

/// Closed-form size yardsticks plus the construction tree. All logarithms are
/// base 2.
struct SizeReport {
    DesignParams params;
    std::string regime;          // "base", "construction1", "construction2", "complement+..."
    double yardstick = 0.0;      // d * C(d,r) / log2 C(d,r)
    double entropy = 0.0;        // H2(r/d)
    double lower_bound = 0.0;    // yardstick * log2(n)
    std::string log_base = "log2";
    u128 family_size = 0;
    StageNode tree;

    nlohmann::json to_json() const;
};

/// d * C(d,r) / log2(C(d,r)); the comparison scale for family sizes.
double size_yardstick(u32 r, u32 s);

SizeReport make_size_report(DesignParams p, std::string regime, StageNode tree);

}  // namespace cffkit
