#include "cffkit/hash_families.hpp"

#include <algorithm>
#include <cmath>

#include "cffkit/numeric.hpp"

namespace cffkit {

namespace {

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u32 digits_needed(u64 n, u64 q) {
    u32 m = 1;
    u128 reach = q;
    while (reach < n) {
        reach = checked_mul(reach, q, "digits_needed");
        ++m;
    }
    return m;
}

void note_stage(StageNode* stage, const std::string& name, const FnFamily& fam) {
    if (!stage) return;
    stage->name = name;
    stage->count = fam.count();
    stage->param("kind", fam.kind());
    stage->param("n", u128(fam.n()));
    stage->param("q", u128(fam.q()));
}

}  // namespace

void Rational::reduce() {
    if (num == 0) {
        den = 1;
        return;
    }
    u128 g = gcd_u128(num, den);
    num /= g;
    den /= g;
}

FnFamily build_phf(u64 n, u64 q, u32 d, bool relaxed, StageNode* stage) {
    if (n == 0 || d == 0) throw InvalidParams("build_phf: n and d must be positive");
    if (!is_prime_power(q)) throw InvalidParams("build_phf: q is not a prime power");
    const u64 pairs = u64(d) * (d - 1) / 2;
    if (!relaxed && d >= 2 && q <= 4 * (pairs + 1))
        throw InvalidParams("build_phf: q must exceed 4*(d*(d-1)/2+1) = " +
                            std::to_string(4 * (pairs + 1)));

    FnFamily out;
    if (n <= q && !relaxed) {
        out = make_identity_family(n, q);
        note_stage(stage, "phf", out);
        if (stage) stage->param("d", u128(d));
        return out;
    }

    const u32 m = digits_needed(n, q);
    if (relaxed || d < 2) {
        out = make_polynomial_family(n, q, m, relaxed ? q : 1);
        note_stage(stage, "phf", out);
        if (stage) {
            stage->param("d", u128(d));
            stage->param("m", u128(m));
            if (relaxed) stage->param("mode", "relaxed");
        }
        return out;
    }

    // Any two distinct points collide in at most m-1 members, so a d-subset
    // rules out at most pairs*(m-1) members; one survivor is enough.
    const u32 m_max = u32(q / (4 * pairs)) + 1;
    if (m <= m_max) {
        const u64 t = pairs * (m - 1) + 1;
        out = make_polynomial_family(n, q, m, t);
        note_stage(stage, "phf", out);
        if (stage) {
            stage->param("d", u128(d));
            stage->param("m", u128(m));
            stage->param("t", u128(t));
        }
        return out;
    }

    // One level of self-composition: hash [n] into the widest directly
    // reachable domain q^m_max, then apply the direct family.
    const u128 big = checked_pow(q, m_max, "build_phf");
    if (big > u128(~u64(0))) throw CapacityError("build_phf: composed alphabet exceeds 64 bits");
    const u64 mid = u64(big);
    StageNode outer_stage, inner_stage;
    FnFamily outer = build_phf(n, mid, d, false, &outer_stage);
    const u64 t_in = pairs * (m_max - 1) + 1;
    FnFamily inner = make_polynomial_family(mid, q, m_max, t_in);
    note_stage(&inner_stage, "phf", inner);
    inner_stage.param("m", u128(m_max));
    out = compose_families(outer, inner);
    if (stage) {
        stage->name = "phf";
        stage->combine = "product";
        stage->count = out.count();
        stage->param("d", u128(d));
        stage->param("mode", "self-composed");
        stage->children = {outer_stage, inner_stage};
    }
    return out;
}

std::optional<Witness> verify_phf(const FnFamily& h, u32 d) {
    const u64 n = h.n();
    if (d == 0 || d > n) throw InvalidParams("verify_phf: need 1 <= d <= n");
    if (h.count() == 0) throw InvalidParams("verify_phf: empty family");

    std::vector<u32> subset(d);
    for (u32 i = 0; i < d; ++i) subset[i] = i;
    std::vector<u32> stamp(h.q() + 1, 0);
    u32 epoch = 0;
    do {
        bool ok = false;
        for (u128 m = 0; m < h.count() && !ok; ++m) {
            ++epoch;
            ok = true;
            for (u32 i = 0; i < d; ++i) {
                const u32 v = h.at(m, subset[i]);
                if (stamp[v] == epoch) {
                    ok = false;
                    break;
                }
                stamp[v] = epoch;
            }
        }
        if (!ok) {
            Witness w;
            w.kind = "phf";
            for (u32 c : subset) w.index_set.push_back(u64(c) + 1);
            w.detail = "no member injective on these points";
            return w;
        }
    } while (next_combination(subset, n));
    return std::nullopt;
}

FnFamily build_dense_shf(u64 n, u64 q, u32 rho1, u32 rho2, u64 eps_num, u64 eps_den,
                         StageNode* stage) {
    if (rho1 == 0 || rho2 == 0) throw InvalidParams("build_dense_shf: rho values must be positive");
    if (eps_num == 0 || eps_num > eps_den)
        throw InvalidParams("build_dense_shf: eps must lie in (0,1]");
    if (!is_prime_power(q)) throw InvalidParams("build_dense_shf: q is not a prime power");
    const u64 cross = u64(rho1) * rho2;
    // eps > 4*(cross+1)/q
    if (u128(eps_num) * q <= u128(4) * (cross + 1) * eps_den)
        throw InvalidParams("build_dense_shf: eps must exceed 4*(rho1*rho2+1)/q");

    FnFamily out;
    if (n <= q) {
        out = make_identity_family(n, q);
        note_stage(stage, "shf", out);
        return out;
    }
    const u32 m = digits_needed(n, q);
    // Each cross pair collides in at most m-1 members; size t keeps the bad
    // fraction at or below eps.
    const u128 t_needed = (u128(cross) * (m - 1) * eps_den + eps_num - 1) / eps_num;
    const u64 t = std::max<u64>(1, u64(t_needed));
    if (t <= q) {
        out = make_polynomial_family(n, q, m, t);
        note_stage(stage, "shf", out);
        if (stage) {
            stage->param("m", u128(m));
            stage->param("t", u128(t));
            stage->param("eps", std::to_string(eps_num) + "/" + std::to_string(eps_den));
        }
        return out;
    }

    // Split the failure budget between an outer stage on a huge alphabet and
    // the direct inner family.
    const u32 m_fit = u32((u128(q) * eps_num) / (u128(cross) * eps_den * 2)) + 1;
    const u128 big = checked_pow(q, m_fit, "build_dense_shf");
    if (big > u128(~u64(0)))
        throw CapacityError("build_dense_shf: composed alphabet exceeds 64 bits");
    const u64 mid = u64(big);
    StageNode outer_stage, inner_stage;
    FnFamily outer = build_dense_shf(n, mid, rho1, rho2, eps_num, eps_den * 2, &outer_stage);
    const u64 t_in = std::max<u64>(1, u64((u128(cross) * (m_fit - 1) * eps_den * 2 + eps_num - 1) /
                                          eps_num));
    FnFamily inner = make_polynomial_family(mid, q, m_fit, t_in);
    note_stage(&inner_stage, "shf", inner);
    out = compose_families(outer, inner);
    if (stage) {
        stage->name = "shf";
        stage->combine = "product";
        stage->count = out.count();
        stage->param("mode", "self-composed");
        stage->children = {outer_stage, inner_stage};
    }
    return out;
}

Rational shf_min_density(const FnFamily& h, u32 rho1, u32 rho2) {
    const u64 n = h.n();
    if (rho1 == 0 || rho2 == 0 || u64(rho1) + rho2 > n)
        throw InvalidParams("shf_min_density: need rho1,rho2 >= 1 and rho1+rho2 <= n");
    if (h.count() == 0) throw InvalidParams("shf_min_density: empty family");

    u128 min_good = h.count();
    std::vector<u32> s1(rho1);
    for (u32 i = 0; i < rho1; ++i) s1[i] = i;
    std::vector<u32> stamp(h.q() + 1, 0);
    u32 epoch = 0;
    do {
        std::vector<u32> rest;
        rest.reserve(n - rho1);
        for (u32 x = 0, j = 0; x < n; ++x) {
            if (j < rho1 && s1[j] == x)
                ++j;
            else
                rest.push_back(x);
        }
        std::vector<u32> pick(rho2);
        for (u32 i = 0; i < rho2; ++i) pick[i] = i;
        do {
            u128 good = 0;
            for (u128 m = 0; m < h.count(); ++m) {
                ++epoch;
                for (u32 i = 0; i < rho1; ++i) stamp[h.at(m, s1[i])] = epoch;
                bool sep = true;
                for (u32 i = 0; i < rho2 && sep; ++i)
                    sep = stamp[h.at(m, rest[pick[i]])] != epoch;
                if (sep) ++good;
            }
            min_good = std::min(min_good, good);
            if (min_good == 0) {
                return {0, 1};
            }
        } while (next_combination(pick, rest.size()));
    } while (next_combination(s1, n));
    Rational r{min_good, h.count()};
    r.reduce();
    return r;
}

namespace {

struct ComposedRows final : BitRowEvaluator {
    std::shared_ptr<const FnFamily> outer;
    CffFamily inner;
    ComposedRows(FnFamily o, CffFamily i)
        : outer(std::make_shared<FnFamily>(std::move(o))), inner(std::move(i)) {}
    bool bit(u128 member, u32 col) const override {
        const u128 oi = member % outer->count();
        const u128 ii = member / outer->count();
        return inner.bit(ii, outer->at(oi, col) - 1);
    }
    void fill_row(u128 member, u64* words, u32 n) const override {
        const u128 oi = member % outer->count();
        const u128 ii = member / outer->count();
        for (u32 w = 0; w < (n + 63) / 64; ++w) words[w] = 0;
        if (inner.materialized()) {
            const BitFamily& rows = inner.dense();
            for (u32 c = 0; c < n; ++c)
                if (rows.bit(u64(ii), outer->at(oi, c) - 1)) words[c / 64] |= u64(1) << (c % 64);
        } else {
            for (u32 c = 0; c < n; ++c)
                if (inner.bit(ii, outer->at(oi, c) - 1)) words[c / 64] |= u64(1) << (c % 64);
        }
    }
};

}  // namespace

CffFamily compose_with_rows(const FnFamily& outer, const CffFamily& inner) {
    if (outer.q() > inner.n())
        throw InvalidParams("compose_with_rows: outer range exceeds inner column count");
    const u128 count = checked_mul(outer.count(), inner.count(), "compose_with_rows");
    auto eval = std::make_shared<ComposedRows>(outer, inner);
    CffFamily out(u32(outer.n()), count, eval);
    if (count <= materialization_cap() && outer.materialized() && inner.materialized())
        return CffFamily(out.materialize());
    return out;
}

FnFamily build_perfect_hash_quadratic(u64 n, u32 t, StageNode* stage) {
    if (t == 0) throw InvalidParams("build_perfect_hash_quadratic: t must be positive");
    const u64 threshold = 4 * (u64(t) * (t - 1) / 2 + 1);
    const u64 q = next_prime_power_above(threshold);
    FnFamily out = build_phf(n, q, t, false, stage);
    if (stage) stage->param("q_auto", u128(q));
    return out;
}

FnFamily build_perfect_hash_compress(u64 m, u32 t, StageNode* stage) {
    if (t == 0) throw InvalidParams("build_perfect_hash_compress: t must be positive");
    if (t > m) throw InvalidParams("build_perfect_hash_compress: t exceeds domain");
    if (m > 64) throw CapacityError("build_perfect_hash_compress: domain above 64 points");
    if (binomial_u128(m, t) > (u128(1) << 20))
        throw CapacityError("build_perfect_hash_compress: C(m,t) exceeds 2^20 subsets");

    std::vector<u32> table;
    u64 made = 0;

    if (t == 1) {
        table.assign(m, 1);
        made = 1;
    } else {
        // All t-subsets, as sorted index arrays.
        std::vector<std::vector<u32>> uncovered;
        std::vector<u32> sub(t);
        for (u32 i = 0; i < t; ++i) sub[i] = i;
        do {
            uncovered.push_back(sub);
        } while (next_combination(sub, m));

        // Integer weights: P(subset completes to a bijection) * t^t.
        std::vector<u64> fact(t + 1, 1);
        for (u32 i = 1; i <= t; ++i) fact[i] = fact[i - 1] * i;
        std::vector<u64> tpow(t + 2, 1);
        for (u32 i = 1; i < t + 2; ++i) tpow[i] = tpow[i - 1] * t;

        std::vector<u32> f(m, 0);
        while (!uncovered.empty()) {
            // Method of conditional expectations, one point at a time.
            for (u64 x = 0; x < m; ++x) {
                u32 best_v = 1;
                u64 best_score = 0;
                for (u32 v = 1; v <= t; ++v) {
                    u64 score = 0;
                    for (const auto& S : uncovered) {
                        if (!std::binary_search(S.begin(), S.end(), u32(x))) continue;
                        // Values already fixed on S (points < x) plus v must stay distinct.
                        u32 used_mask = 1u << (v - 1);
                        u32 a = 1;
                        bool ok = true;
                        for (u32 y : S) {
                            if (y >= x) break;
                            const u32 bit = 1u << (f[y] - 1);
                            if (used_mask & bit) {
                                ok = false;
                                break;
                            }
                            used_mask |= bit;
                            ++a;
                        }
                        if (ok) score += fact[t - a] * tpow[a];
                    }
                    if (score > best_score) {
                        best_score = score;
                        best_v = v;
                    }
                }
                f[x] = best_v;
            }
            // Remove everything this member covers.
            std::vector<std::vector<u32>> still;
            still.reserve(uncovered.size());
            for (auto& S : uncovered) {
                u32 used_mask = 0;
                bool bij = true;
                for (u32 y : S) {
                    const u32 bit = 1u << (f[y] - 1);
                    if (used_mask & bit) {
                        bij = false;
                        break;
                    }
                    used_mask |= bit;
                }
                if (!bij) still.push_back(std::move(S));
            }
            if (still.size() == uncovered.size())
                throw CapacityError("build_perfect_hash_compress: greedy made no progress");
            uncovered = std::move(still);
            table.insert(table.end(), f.begin(), f.end());
            ++made;
        }
    }

    FnFamily out = FnFamily::from_table(m, t, std::move(table), "compress");
    if (stage) {
        note_stage(stage, "compress", out);
        stage->param("t", u128(t));
        stage->param("members", u128(made));
    }
    return out;
}

}  // namespace cffkit
