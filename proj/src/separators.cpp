#include "cffkit/separators.hpp"

#include <algorithm>

#include "cffkit/cff_build.hpp"
#include "cffkit/hash_families.hpp"
#include "cffkit/numeric.hpp"

namespace cffkit {

u32 SeparatingFamily::at(u128 member, u64 x) const {
    const u128 f0_idx = member % f0.count();
    const u128 rest = member / f0.count();
    const u128 f1_idx = rest % f1.count();
    const u128 f2_idx = rest / f1.count();
    const u32 y = f0.at(f0_idx, x);
    if (!f1.bit(f1_idx, y - 1)) return t + 1;
    return f2.at(f2_idx, y - 1);
}

SeparatingFamily build_min_separating(u64 n, u32 t, u32 k) {
    if (n == 0) throw InvalidParams("build_min_separating: empty domain");
    if (t > k || u64(k) > n) throw InvalidParams("build_min_separating: need t <= k <= n");
    SeparatingFamily h;
    h.n = n;
    h.t = t;
    h.k = k;

    if (t == 0) {
        // One constant member at level t+1 covers every (empty C, D) pair.
        h.f0 = make_constant_family(n, 1, 1);
        BitFamily zero(1);
        zero.append_row_zero();
        h.f1 = CffFamily(std::move(zero));
        h.f2 = make_constant_family(1, 1, 1);
        h.count = 1;
        h.stage.name = "min_separating";
        h.stage.count = 1;
        h.stage.param("n", u128(n));
        h.stage.param("t", u128(t));
        h.stage.param("k", u128(k));
        h.stage.param("mode", "constant");
        return h;
    }

    StageNode s0, s1, s2;
    h.f0 = build_perfect_hash_quadratic(n, k, &s0);
    const u64 q0 = h.f0.q();

    if (t == k) {
        // No value may be pushed to the overflow level; a single all-ones
        // filter row keeps every hash value live.
        BitFamily ones(static_cast<u32>(q0));
        ones.append_row_zero();
        for (u32 c = 0; c < u32(q0); ++c) ones.set_bit(0, c);
        h.f1 = CffFamily(std::move(ones));
        s1.name = "all_ones";
        s1.count = 1;
        s1.param("q", u128(q0));
    } else {
        CffBuild filter = build_cff(q0, t, k - t);
        if (!filter.family.materialized())
            throw CapacityError("build_min_separating: filter family exceeds the cap");
        h.f1 = filter.family;
        s1 = filter.report.tree;
    }

    h.f2 = build_perfect_hash_compress(q0, t, &s2);
    h.count = checked_mul(checked_mul(h.f0.count(), h.f1.count(), "build_min_separating"),
                          h.f2.count(), "build_min_separating");

    h.stage.name = "min_separating";
    h.stage.combine = "product";
    h.stage.count = h.count;
    h.stage.param("n", u128(n));
    h.stage.param("t", u128(t));
    h.stage.param("k", u128(k));
    h.stage.param("q0", u128(q0));
    h.stage.children = {std::move(s0), std::move(s1), std::move(s2)};
    return h;
}

namespace {

std::optional<Witness> verify_separating_table(const std::vector<u32>& table, u64 count, u64 n,
                                               u32 t, u32 k) {
    if (t > k || u64(k) > n) throw InvalidParams("verify_min_separating: need t <= k <= n");
    if (count == 0) throw InvalidParams("verify_min_separating: empty family");
    if (n > 64) throw CapacityError("verify_min_separating: domain above 64 points");
    if (binomial_u128(n, t) > (u128(1) << 20))
        throw CapacityError("verify_min_separating: too many target sets");

    std::vector<u32> c(t);
    for (u32 i = 0; i < t; ++i) c[i] = i;
    std::vector<u8> in_c(n, 0);
    std::vector<u8> seen(t + 2, 0);
    bool more_c = true;
    while (more_c) {
        std::fill(in_c.begin(), in_c.end(), 0);
        for (u32 x : c) in_c[x] = 1;
        std::vector<u32> rest;
        rest.reserve(n - t);
        for (u32 x = 0; x < n; ++x)
            if (!in_c[x]) rest.push_back(x);

        for (u32 dsz = 0; dsz + t <= k; ++dsz) {
            if (dsz > rest.size()) break;
            std::vector<u32> pick(dsz);
            for (u32 i = 0; i < dsz; ++i) pick[i] = i;
            bool more_d = true;
            while (more_d) {
                bool covered = false;
                for (u64 m = 0; m < count && !covered; ++m) {
                    const u32* row = table.data() + m * n;
                    bool ok = true;
                    std::fill(seen.begin(), seen.end(), 0);
                    for (u32 i = 0; i < t && ok; ++i) {
                        const u32 v = row[c[i]];
                        ok = v <= t && !seen[v];
                        if (ok) seen[v] = 1;
                    }
                    for (u32 i = 0; i < dsz && ok; ++i) ok = row[rest[pick[i]]] == t + 1;
                    covered = ok;
                }
                if (!covered) {
                    Witness w;
                    w.kind = "minsep";
                    for (u32 x : c) w.index_set.push_back(u64(x) + 1);
                    for (u32 i = 0; i < dsz; ++i) w.second_set.push_back(u64(rest[pick[i]]) + 1);
                    w.detail = "no member maps the first set onto [t] and the second to t+1";
                    return w;
                }
                more_d = dsz > 0 && next_combination(pick, rest.size());
            }
        }
        more_c = t > 0 && next_combination(c, n);
    }
    return std::nullopt;
}

}  // namespace

std::optional<Witness> verify_min_separating(const SeparatingFamily& h) {
    if (checked_mul(h.count, h.n, "verify_min_separating") > (u128(1) << 26))
        throw CapacityError("verify_min_separating: family too large to tabulate");
    const u64 count = u64(h.count);
    std::vector<u32> table(size_t(count * h.n));
    for (u64 m = 0; m < count; ++m)
        for (u64 x = 0; x < h.n; ++x) table[size_t(m * h.n + x)] = h.at(m, x);
    return verify_separating_table(table, count, h.n, h.t, h.k);
}

std::optional<Witness> verify_separating_values(const std::vector<std::vector<u32>>& rows, u64 n,
                                                u32 t, u32 k) {
    if (rows.empty()) throw InvalidParams("verify_min_separating: empty family");
    std::vector<u32> table;
    table.reserve(rows.size() * size_t(n));
    for (const auto& row : rows) {
        if (row.size() != n) throw InvalidParams("verify_min_separating: ragged value table");
        for (u32 v : row) {
            if (v == 0 || v > t + 1)
                throw InvalidParams("verify_min_separating: value outside [1..t+1]");
            table.push_back(v);
        }
    }
    return verify_separating_table(table, rows.size(), n, t, k);
}

u64 RMultiset::size() const {
    u64 s = 0;
    for (u32 x : v) s += x;
    return s;
}

RMultiset RMultiset::complement() const {
    RMultiset out;
    out.r = r;
    out.v.reserve(v.size());
    for (u32 x : v) {
        if (x > r) throw InvalidParams("RMultiset: multiplicity above r");
        out.v.push_back(r - x);
    }
    return out;
}

namespace {

bool advance_counter(std::vector<u32>& a, u32 radix) {
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] + 1 < radix) {
            ++a[i];
            std::fill(a.begin() + long(i) + 1, a.end(), 0);
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<Witness> verify_multiset_separator(const std::vector<RMultiset>& fam, u64 n, u32 r,
                                                 u32 k) {
    if (n == 0 || r == 0) throw InvalidParams("verify_multiset_separator: need n >= 1, r >= 1");
    const u128 space = checked_pow(r + 1, u32(n), "verify_multiset_separator");
    if (space > (u128(1) << 12))
        throw CapacityError("verify_multiset_separator: (r+1)^n above the exhaustive cap");
    for (const auto& f : fam) {
        if (f.v.size() != n || f.r != r)
            throw InvalidParams("verify_multiset_separator: member shape mismatch");
        for (u32 x : f.v)
            if (x > r) throw InvalidParams("verify_multiset_separator: multiplicity above r");
    }

    std::vector<u32> a(n, 0);
    do {
        u64 asz = 0;
        for (u32 x : a) asz += x;
        if (asz > k) continue;
        std::vector<u32> b(n, 0);
        do {
            bool compatible = true;
            u64 bsz = 0;
            for (u64 i = 0; i < n && compatible; ++i) {
                compatible = a[i] + b[i] <= r;
                bsz += b[i];
            }
            if (!compatible || asz + bsz != k) continue;
            bool covered = false;
            for (const auto& f : fam) {
                bool ok = true;
                for (u64 i = 0; i < n && ok; ++i) ok = a[i] <= f.v[i] && f.v[i] <= r - b[i];
                if (ok) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                Witness w;
                w.kind = "multiset";
                std::vector<u64> av(a.begin(), a.end()), bv(b.begin(), b.end());
                w.blocks.emplace_back(std::move(av), std::move(bv));
                w.detail = "multiplicity vectors (A,B); no F with A <= F <= r-B";
                return w;
            }
        } while (advance_counter(b, r + 1));
    } while (advance_counter(a, r + 1));
    return std::nullopt;
}

std::vector<RMultiset> lift_to_multiset_separator(const SeparatingFamily& h, u32 r, u32 k) {
    if (r == 0 || k == 0) throw InvalidParams("lift_to_multiset_separator: need r,k >= 1");
    const u32 t_req = 2 * k / r;
    if (h.t != t_req)
        throw InvalidParams("lift_to_multiset_separator: family has t=" + std::to_string(h.t) +
                            " but floor(2k/r)=" + std::to_string(t_req));
    const u128 v_space = checked_pow(r + 1, h.t, "lift_to_multiset_separator");
    const u128 total = checked_mul(h.count, v_space, "lift_to_multiset_separator");
    if (total > (u128(1) << 20))
        throw CapacityError("lift_to_multiset_separator: lifted family too large");

    std::optional<Witness> last;
    for (u32 w = 0; w <= r; ++w) {
        std::vector<RMultiset> fam;
        fam.reserve(size_t(total));
        for (u128 m = 0; m < h.count; ++m) {
            std::vector<u32> levels(h.t, 0);
            bool more = true;
            while (more) {
                RMultiset f;
                f.r = r;
                f.v.resize(size_t(h.n));
                for (u64 x = 0; x < h.n; ++x) {
                    const u32 y = h.at(m, x);
                    f.v[size_t(x)] = y <= h.t ? levels[y - 1] : w;
                }
                fam.push_back(std::move(f));
                more = h.t > 0 && advance_counter(levels, r + 1);
            }
        }
        last = verify_multiset_separator(fam, h.n, r, k);
        if (!last) return fam;
    }
    last->detail = "no default level in 0..r completes the lift; " + last->detail;
    throw VerificationFailed(std::move(*last));
}

}  // namespace cffkit
