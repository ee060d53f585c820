#include "cffkit/report.hpp"

#include <cmath>

#include "cffkit/numeric.hpp"

namespace cffkit {

u128 StageNode::recompute() const {
    if (children.empty()) return count;
    u128 acc = combine == "sum" ? 0 : 1;
    for (const StageNode& c : children) {
        const u128 cc = c.recompute();
        acc = combine == "sum" ? checked_add(acc, cc, "stage tree")
                               : checked_mul(acc, cc, "stage tree");
    }
    if (repeat != 1) acc = checked_pow(acc, repeat, "stage tree");
    return acc;
}

bool StageNode::consistent() const {
    for (const StageNode& c : children)
        if (!c.consistent()) return false;
    return recompute() == count;
}

nlohmann::json StageNode::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["combine"] = combine;
    if (repeat != 1) j["repeat"] = repeat;
    j["count"] = to_string_u128(count);
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    if (!children.empty()) {
        nlohmann::json kids = nlohmann::json::array();
        for (const StageNode& c : children) kids.push_back(c.to_json());
        j["stages"] = kids;
    }
    return j;
}

double size_yardstick(u32 r, u32 s) {
    const u32 d = r + s;
    double binom, log_binom;
    try {
        binom = double(binomial_u128(d, r));
        log_binom = std::log2(binom);
    } catch (const CapacityError&) {
        log_binom = log2_binomial(d, r);
        binom = std::exp2(log_binom);
    }
    if (log_binom <= 0.0) throw InvalidParams("size_yardstick: C(d,r) must exceed 1");
    return double(d) * binom / log_binom;
}

SizeReport make_size_report(DesignParams p, std::string regime, StageNode tree) {
    SizeReport rep;
    rep.params = p;
    rep.regime = std::move(regime);
    rep.yardstick = size_yardstick(p.r, p.s);
    rep.entropy = binary_entropy(double(p.r) / double(p.d()));
    rep.lower_bound = rep.yardstick * std::log2(double(p.n));
    rep.family_size = tree.count;
    rep.tree = std::move(tree);
    return rep;
}

nlohmann::json SizeReport::to_json() const {
    nlohmann::json j;
    j["n"] = params.n;
    j["r"] = params.r;
    j["s"] = params.s;
    j["regime"] = regime;
    j["yardstick"] = yardstick;
    j["entropy"] = entropy;
    j["lower_bound"] = lower_bound;
    j["log_base"] = log_base;
    j["family_size"] = to_string_u128(family_size);
    j["tree"] = tree.to_json();
    return j;
}

}  // namespace cffkit
