#include "cffkit/rectangles.hpp"

#include <cmath>
#include <random>

namespace cffkit {

PointSet build_hitting_set(u64 t, u64 k, double gamma, const std::string& mode, u64 seed) {
    if (t == 0 || k == 0) throw InvalidParams("build_hitting_set: t and k must be positive");
    if (!(gamma > 0.0) || gamma > 1.0) throw InvalidParams("build_hitting_set: need 0 < gamma <= 1");

    PointSet h;
    h.t = t;
    h.k = k;
    h.mode = mode;

    if (mode == "exact-product") {
        const u128 total = checked_pow(t, u32(k), "build_hitting_set");
        if (total > materialization_cap())
            throw CapacityError("build_hitting_set: t^k = " + to_string_u128(total) +
                                " points exceed the cap; use heuristic-random mode");
        std::vector<u32> p(k, 1);
        h.points.reserve(size_t(total));
        for (u128 i = 0; i < total; ++i) {
            h.points.push_back(p);
            for (u64 j = k; j-- > 0;) {
                if (++p[j] <= t) break;
                p[j] = 1;
            }
        }
        return h;
    }

    if (mode == "heuristic-random") {
        const double raw = 3.0 * std::pow(1.0 / gamma, double(k)) *
                           (double(k) * std::log2(double(t)) + std::log2(100.0));
        const u64 size = std::max<u64>(1, u64(std::ceil(raw)));
        if (size > materialization_cap())
            throw CapacityError("build_hitting_set: heuristic sample of " + std::to_string(size) +
                                " points exceeds the cap");
        // Raw engine output (not a distribution adaptor) keeps the sample
        // bit-identical across standard library implementations.
        std::mt19937_64 rng(seed ^ (t * 0x9e3779b97f4a7c15ULL) ^ (k * 0xbf58476d1ce4e5b9ULL));
        h.points.assign(size, std::vector<u32>(k));
        for (auto& p : h.points)
            for (u64 j = 0; j < k; ++j) p[j] = u32(rng() % t) + 1;
        return h;
    }

    throw InvalidParams("build_hitting_set: mode must be exact-product or heuristic-random");
}

std::optional<u64> verify_hitting_set(const PointSet& h, const std::vector<Rectangle>& rectangles) {
    if (h.t == 0 || h.k == 0) throw InvalidParams("verify_hitting_set: empty point set shape");
    for (const auto& p : h.points)
        if (p.size() != h.k) throw InvalidParams("verify_hitting_set: point arity mismatch");

    std::vector<std::vector<char>> in_side(h.k, std::vector<char>(h.t + 1, 0));
    for (u64 ri = 0; ri < rectangles.size(); ++ri) {
        const Rectangle& rect = rectangles[ri];
        if (rect.sides.size() != h.k)
            throw InvalidParams("verify_hitting_set: rectangle arity mismatch");
        for (u64 j = 0; j < h.k; ++j) {
            if (rect.sides[j].empty())
                throw InvalidParams("verify_hitting_set: empty rectangle side");
            std::fill(in_side[j].begin(), in_side[j].end(), 0);
            for (u32 v : rect.sides[j]) {
                if (v < 1 || v > h.t)
                    throw InvalidParams("verify_hitting_set: side value outside [1..t]");
                in_side[j][v] = 1;
            }
        }
        bool hit = false;
        for (const auto& p : h.points) {
            bool inside = true;
            for (u64 j = 0; j < h.k && inside; ++j) inside = in_side[j][p[j]] != 0;
            if (inside) {
                hit = true;
                break;
            }
        }
        if (!hit) return ri;
    }
    return std::nullopt;
}

}  // namespace cffkit
