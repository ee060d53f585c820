#include "cffkit/fn_family.hpp"

#include "cffkit/gf.hpp"
#include "cffkit/numeric.hpp"

namespace cffkit {

namespace {

constexpr u64 kTableEntryCap = u64(1) << 26;

struct IdentityEval final : FnEvaluator {
    u64 n, q;
    IdentityEval(u64 n_, u64 q_) : n(n_), q(q_) {}
    u32 at(u128, u64 point) const override { return u32(point) + 1; }
    nlohmann::json descriptor() const override {
        return {{"kind", "identity"}, {"n", n}, {"q", q}};
    }
};

struct ConstEval final : FnEvaluator {
    u64 n, q;
    u32 value;
    ConstEval(u64 n_, u64 q_, u32 v) : n(n_), q(q_), value(v) {}
    u32 at(u128, u64) const override { return value; }
    nlohmann::json descriptor() const override {
        return {{"kind", "const"}, {"n", n}, {"q", q}, {"value", value}};
    }
};

struct PolyEval final : FnEvaluator {
    u64 n, q, t;
    u32 m;
    std::shared_ptr<const Gf> field;
    PolyEval(u64 n_, u64 q_, u32 m_, u64 t_)
        : n(n_), q(q_), t(t_), m(m_), field(std::make_shared<Gf>(q_)) {}
    u32 at(u128 member, u64 point) const override {
        const u32 a = u32(u64(member));
        // Horner over the base-q digits of the point, high digit first.
        u32 val = 0;
        for (u32 i = m; i-- > 0;) {
            u64 scale = 1;
            for (u32 j = 0; j < i; ++j) scale *= q;
            u32 digit = u32((point / scale) % q);
            val = field->add(field->mul(val, a), digit);
        }
        return val + 1;
    }
    nlohmann::json descriptor() const override {
        return {{"kind", "rs"}, {"n", n}, {"q", q}, {"m", m}, {"t", t}};
    }
};

struct ComposeEval final : FnEvaluator {
    std::shared_ptr<const FnFamily> outer, inner;
    ComposeEval(FnFamily o, FnFamily i)
        : outer(std::make_shared<FnFamily>(std::move(o))),
          inner(std::make_shared<FnFamily>(std::move(i))) {}
    u32 at(u128 member, u64 point) const override {
        const u128 oc = outer->count();
        const u128 oi = member % oc;
        const u128 ii = member / oc;
        const u32 mid = outer->at(oi, point);
        return inner->at(ii, mid - 1);
    }
    nlohmann::json descriptor() const override {
        return {{"kind", "compose"}, {"outer", outer->descriptor()}, {"inner", inner->descriptor()}};
    }
};

struct StitchEval final : FnEvaluator {
    u64 m;
    u32 z;
    u64 koz;
    std::shared_ptr<const FnFamily> inner;
    u128 tuple_space;
    StitchEval(u64 m_, u32 z_, u64 koz_, FnFamily in)
        : m(m_), z(z_), koz(koz_), inner(std::make_shared<FnFamily>(std::move(in))) {
        tuple_space = checked_pow(inner->count(), z, "stitched family");
    }
    u32 at(u128 member, u64 point) const override {
        const u128 tuple_rank = member % tuple_space;
        const u128 cut_rank = member / tuple_space;
        auto cuts = unrank_combination(m - 1, z - 1, cut_rank);  // 0-based; cut at v means boundary v+1
        u32 piece = 0;
        for (u32 c : cuts)
            if (u64(c) + 1 <= point) ++piece;
        u128 div = tuple_rank;
        u128 h = 0;
        // piece 0 is the most significant tuple digit
        for (u32 i = z - 1; i > piece; --i) div /= inner->count();
        h = div % inner->count();
        return inner->at(h, point) + u32(koz * piece);
    }
    nlohmann::json descriptor() const override {
        return {{"kind", "stitch"},
                {"m", m},
                {"z", z},
                {"k_over_z", koz},
                {"inner", inner->descriptor()}};
    }
};

}  // namespace

FnFamily FnFamily::from_table(u64 n, u64 q, std::vector<u32> values, std::string kind) {
    if (n == 0 || q == 0) throw InvalidParams("FnFamily::from_table: empty domain or range");
    if (values.size() % n != 0) throw InvalidParams("FnFamily::from_table: ragged table");
    FnFamily f;
    f.n_ = n;
    f.q_ = q;
    f.count_ = values.size() / n;
    f.kind_ = std::move(kind);
    f.values_ = std::move(values);
    for (u32 v : f.values_)
        if (v < 1 || v > q) throw InvalidParams("FnFamily::from_table: value outside [1..q]");
    return f;
}

FnFamily FnFamily::lazy(u64 n, u64 q, u128 count, std::shared_ptr<const FnEvaluator> eval,
                        std::string kind) {
    FnFamily f;
    f.n_ = n;
    f.q_ = q;
    f.count_ = count;
    f.kind_ = std::move(kind);
    f.eval_ = std::move(eval);
    return f;
}

FnFamily FnFamily::materialize() const {
    if (materialized()) return *this;
    const u128 entries = checked_mul(count_, n_, "FnFamily::materialize");
    if (entries > kTableEntryCap)
        throw CapacityError("FnFamily::materialize: " + to_string_u128(entries) +
                            " entries exceed table cap");
    std::vector<u32> table;
    table.reserve(size_t(entries));
    for (u128 m = 0; m < count_; ++m)
        for (u64 x = 0; x < n_; ++x) table.push_back(eval_->at(m, x));
    return from_table(n_, q_, std::move(table), kind_);
}

nlohmann::json FnFamily::descriptor() const {
    if (eval_) return eval_->descriptor();
    throw CapacityError("FnFamily::descriptor: tabulated family has no generator form");
}

FnFamily make_identity_family(u64 n, u64 q) {
    if (n > q) throw InvalidParams("make_identity_family: n exceeds q");
    return FnFamily::lazy(n, q, 1, std::make_shared<IdentityEval>(n, q), "identity");
}

FnFamily make_constant_family(u64 n, u64 q, u32 value) {
    if (value < 1 || value > q) throw InvalidParams("make_constant_family: value outside range");
    return FnFamily::lazy(n, q, 1, std::make_shared<ConstEval>(n, q, value), "const");
}

FnFamily make_polynomial_family(u64 n, u64 q, u32 m, u64 t) {
    if (m == 0) throw InvalidParams("make_polynomial_family: m must be positive");
    if (t < 1 || t > q) throw InvalidParams("make_polynomial_family: t outside [1..q]");
    if (checked_pow(q, m, "polynomial family domain") < n)
        throw InvalidParams("make_polynomial_family: q^m below n");
    return FnFamily::lazy(n, q, t, std::make_shared<PolyEval>(n, q, m, t), "rs");
}

FnFamily compose_families(const FnFamily& outer, const FnFamily& inner) {
    if (outer.q() > inner.n())
        throw InvalidParams("compose_families: outer range exceeds inner domain");
    const u128 count = checked_mul(outer.count(), inner.count(), "compose_families");
    auto eval = std::make_shared<ComposeEval>(outer, inner);
    FnFamily f = FnFamily::lazy(outer.n(), inner.q(), count, eval, "compose");
    if (outer.materialized() && inner.materialized() &&
        checked_mul(count, outer.n(), "compose_families") <= kTableEntryCap)
        return f.materialize();
    return f;
}

FnFamily make_stitched_family(u64 m, u32 z, u64 k_over_z, const FnFamily& inner) {
    if (z == 0 || m < z) throw InvalidParams("make_stitched_family: need z >= 1 and m >= z");
    if (inner.n() < m) throw InvalidParams("make_stitched_family: inner domain below m");
    auto eval = std::make_shared<StitchEval>(m, z, k_over_z, inner);
    const u128 cuts = binomial_u128(m - 1, z - 1);
    const u128 count = checked_mul(cuts, eval->tuple_space, "stitched family");
    return FnFamily::lazy(m, k_over_z * z, count, eval, "stitch");
}

FnFamily family_from_descriptor(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return make_identity_family(j.at("n"), j.at("q"));
    if (kind == "const") return make_constant_family(j.at("n"), j.at("q"), j.at("value"));
    if (kind == "rs")
        return make_polynomial_family(j.at("n"), j.at("q"), j.at("m"), j.at("t"));
    if (kind == "compose")
        return compose_families(family_from_descriptor(j.at("outer")),
                                family_from_descriptor(j.at("inner")));
    if (kind == "stitch")
        return make_stitched_family(j.at("m"), j.at("z"), j.at("k_over_z"),
                                    family_from_descriptor(j.at("inner")));
    throw InvalidParams("family_from_descriptor: unknown kind '" + kind + "'");
}

}  // namespace cffkit
