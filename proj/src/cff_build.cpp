#include "cffkit/cff_build.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "cffkit/hash_families.hpp"
#include "cffkit/numeric.hpp"
#include "cffkit/splitters.hpp"

namespace cffkit {

namespace {

u32 digits_needed(u64 n, u64 q) {
    u32 m = 1;
    u128 reach = q;
    while (reach < n) {
        reach = checked_mul(reach, q, "digits_needed");
        ++m;
    }
    return m;
}

std::string join_u32(const std::vector<u32>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Base slices: one hash stage into a small prime-power alphabet plus every
// `ones`-subset of that alphabet. The workhorse shared by the base family
// and the per-bucket pieces of construction 1.
// ---------------------------------------------------------------------------

struct BaseSlice {
    u64 domain = 0;
    u32 ones = 0, zeros = 0;
    u64 qb = 0;  // 0: the single all-ones row (zeros == 0)
    FnFamily shf;
    u128 subsets = 1;
    u128 count = 1;
    StageNode stage;
};

BaseSlice make_base_slice(u64 n, u32 ones, u32 zeros) {
    BaseSlice s;
    s.domain = n;
    s.ones = ones;
    s.zeros = zeros;
    if (zeros == 0) {
        s.stage.name = "all_ones";
        s.stage.count = 1;
        s.stage.param("n", u128(n));
        return s;
    }
    if (ones == 0) throw InvalidParams("base slice: patterns need at least one marked column");
    const u64 w = 24ull * ones * zeros;
    const auto q = smallest_prime_power_in(w, 2 * w);
    if (!q) throw CapacityError("base slice: no prime power in the canonical alphabet window");
    s.qb = *q;
    StageNode shf_stage;
    s.shf = build_dense_shf(n, s.qb, ones, zeros, 1, 2, &shf_stage);
    s.subsets = binomial_u128(s.qb, ones);
    s.count = checked_mul(s.shf.count(), s.subsets, "base slice");
    s.stage.name = "base_cff";
    s.stage.combine = "product";
    s.stage.count = s.count;
    s.stage.param("ones", u128(ones));
    s.stage.param("zeros", u128(zeros));
    s.stage.param("q", u128(s.qb));
    StageNode subs;
    subs.name = "range_subsets";
    subs.count = s.subsets;
    subs.param("q", u128(s.qb));
    subs.param("pick", u128(ones));
    s.stage.children = {shf_stage, subs};
    return s;
}

/// Decoded slice member: which hash member it uses and the membership mask
/// of its value subset.
struct SliceState {
    const BaseSlice* slice = nullptr;
    u128 shf_idx = 0;
    std::vector<u8> mask;

    void assign(const BaseSlice& s, u128 local) {
        slice = &s;
        if (s.qb == 0) return;
        shf_idx = local / s.subsets;
        const auto sel = unrank_combination(s.qb, s.ones, local % s.subsets);
        mask.assign(size_t(s.qb), 0);
        for (u32 v : sel) mask[v] = 1;
    }
    bool bit(u64 point) const {
        if (slice->qb == 0) return true;
        return mask[slice->shf.at(shf_idx, point) - 1] != 0;
    }
};

/// Rows of the base family: member h_idx * C(q,ones) + subset_rank. fill_row
/// keeps the previous subset around so sequential materialization advances
/// the mask in O(ones) instead of re-unranking (single-threaded use).
struct BaseCffRows final : BitRowEvaluator {
    u64 n = 0;
    BaseSlice slice;

    mutable bool primed = false;
    mutable u128 last_member = 0;
    mutable u128 last_shf = 0;
    mutable std::vector<u32> sel;
    mutable std::vector<u8> mask;
    mutable std::vector<u32> values;

    BaseCffRows(u64 n_, BaseSlice s) : n(n_), slice(std::move(s)) {}

    bool bit(u128 member, u32 col) const override {
        if (slice.qb == 0) return true;
        const u128 shf_idx = member / slice.subsets;
        const auto r_sel = unrank_combination(slice.qb, slice.ones, member % slice.subsets);
        const u32 v = slice.shf.at(shf_idx, col) - 1;
        return std::binary_search(r_sel.begin(), r_sel.end(), v);
    }

    void fill_row(u128 member, u64* words, u32 cols) const override {
        const u128 shf_idx = member / slice.subsets;
        const bool sequential = primed && member == last_member + 1 && shf_idx == last_shf;
        if (shf_idx != last_shf || !primed || values.empty()) {
            values.resize(cols);
            for (u32 x = 0; x < cols; ++x) values[x] = slice.shf.at(shf_idx, x);
        }
        if (sequential) {
            for (u32 v : sel) mask[v] = 0;
            next_combination(sel, slice.qb);
            for (u32 v : sel) mask[v] = 1;
        } else {
            sel = unrank_combination(slice.qb, slice.ones, member % slice.subsets);
            mask.assign(size_t(slice.qb), 0);
            for (u32 v : sel) mask[v] = 1;
        }
        last_member = member;
        last_shf = shf_idx;
        primed = true;
        const u32 nw = (cols + 63) / 64;
        for (u32 w = 0; w < nw; ++w) words[w] = 0;
        for (u32 x = 0; x < cols; ++x)
            if (mask[values[x] - 1]) words[x / 64] |= u64(1) << (x % 64);
    }
};

u32 checked_columns(u64 n, const char* what) {
    if (n == 0) throw InvalidParams(std::string(what) + ": need at least one column");
    if (n > 0xffffffffull) throw InvalidParams(std::string(what) + ": column count above 2^32-1");
    return u32(n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Compositions
// ---------------------------------------------------------------------------

CompositionList::CompositionList(u32 d_, u32 k_, u32 lo_) : d(d_), k(k_), lo(lo_) {
    if (k == 0) throw InvalidParams("CompositionList: need at least one part");
}

u128 CompositionList::count() const {
    if (u64(k) * lo > d) return 0;
    return binomial_u128(d - u64(k) * lo + k - 1, k - 1);
}

std::vector<u32> CompositionList::first() const {
    if (count() == 0) throw InvalidParams("CompositionList: no composition meets the floor");
    std::vector<u32> c(k, lo);
    c[k - 1] = d - (k - 1) * lo;
    return c;
}

bool CompositionList::next(std::vector<u32>& comp) const {
    if (comp.size() != k) throw InvalidParams("CompositionList: wrong arity");
    // Lexicographic successor: bump the rightmost free position that still
    // leaves every later part its floor, reset everything after it.
    u64 prefix = 0;
    for (u32 i = 0; i + 1 < k; ++i) prefix += comp[i];
    for (u32 i = k - 1; i-- > 0;) {
        prefix -= comp[i];
        if (prefix + comp[i] + 1 + u64(k - 1 - i) * lo <= d) {
            ++comp[i];
            for (u32 j = i + 1; j + 1 < k; ++j) comp[j] = lo;
            u64 used = prefix + comp[i] + u64(k - 2 - i) * lo;
            comp[k - 1] = u32(d - used);
            return true;
        }
    }
    return false;
}

std::vector<std::vector<u32>> CompositionList::all(u64 cap) const {
    if (count() > cap) throw CapacityError("CompositionList: too many compositions");
    std::vector<std::vector<u32>> out;
    if (count() == 0) return out;
    auto c = first();
    do {
        out.push_back(c);
    } while (next(c));
    return out;
}

// ---------------------------------------------------------------------------
// Multi-block families
// ---------------------------------------------------------------------------

McffMember McffFamily::decode(u128 member) const {
    const u32 k = block_count();
    McffMember mem;
    mem.g.resize(k);
    mem.in_r.resize(k);
    u128 prod = 1;
    for (const u128 c : subset_counts) prod *= c;
    const u128 g_idx = member / prod;
    u128 rpart = member % prod;
    for (u32 b = k; b-- > 0;) {
        const u128 rank = rpart % subset_counts[b];
        rpart /= subset_counts[b];
        const auto sel = unrank_combination(blocks[b].q, blocks[b].rho1, rank);
        mem.in_r[b].assign(size_t(blocks[b].q), 0);
        for (u32 v : sel) mem.in_r[b][v] = 1;
    }
    const auto& pt = selector.points.at(size_t(g_idx));
    for (u32 b = 0; b < k; ++b) mem.g[b] = u32((u64(pt[b]) - 1) % hash_periods[b]);
    return mem;
}

bool McffFamily::bit(const McffMember& mem, u32 block, u64 point) const {
    const u32 v = hashes[block].at(mem.g[block], point);
    return mem.in_r[block][v - 1] != 0;
}

bool McffFamily::bit(u128 member, u32 block, u64 point) const {
    return bit(decode(member), block, point);
}

McffFamily build_mcff(u64 n, const MultiCffSpec& spec, const std::string& selector_mode, u64 seed,
                      StageNode* stage) {
    if (n == 0) throw InvalidParams("build_mcff: empty domain");
    if (spec.blocks.empty()) throw InvalidParams("build_mcff: need at least one block");
    McffFamily f;
    f.n = n;
    f.blocks = spec.blocks;
    const u32 k = f.block_count();

    u64 arity = 1;
    std::vector<u32> digits(k);
    std::vector<u64> cross(k);
    for (u32 b = 0; b < k; ++b) {
        auto& blk = f.blocks[b];
        if (blk.rho1 == 0 || blk.rho2 == 0)
            throw InvalidParams("build_mcff: block pattern sizes must be >= 1");
        cross[b] = u64(blk.rho1) * blk.rho2;
        if (blk.q == 0) {
            const u64 w = 24 * cross[b];
            const auto q = smallest_prime_power_in(w, 2 * w);
            if (!q) throw CapacityError("build_mcff: no prime power in the canonical window");
            blk.q = *q;
        } else if (!is_prime_power(blk.q)) {
            throw InvalidParams("build_mcff: block alphabet must be a prime power");
        }
        if (blk.q < u64(blk.rho1) + blk.rho2)
            throw InvalidParams("build_mcff: block alphabet below rho1+rho2");
        digits[b] = digits_needed(n, blk.q);
        arity = std::max(arity, std::max<u64>(1, 2 * cross[b] * (digits[b] - 1)));
    }

    f.count = 1;
    for (u32 b = 0; b < k; ++b) {
        const auto& blk = f.blocks[b];
        // All blocks share the selector arity. A field with fewer than
        // `arity` evaluation points repeats its members cyclically, which is
        // only sound while at least half of them still separate any one
        // pattern: 2 * rho1*rho2 * (m-1) * ceil(arity/period) <= arity.
        const u64 period = std::min(arity, blk.q);
        const u64 cycles = (arity + period - 1) / period;
        if (u128(2) * cross[b] * (digits[b] - 1) * cycles > arity)
            throw CapacityError("build_mcff: block " + std::to_string(b + 1) +
                                " cannot keep half its members separating under the shared "
                                "selector arity; give it a larger alphabet");
        f.hashes.push_back(make_polynomial_family(n, blk.q, digits[b], period));
        f.hash_periods.push_back(period);
        f.subset_counts.push_back(binomial_u128(blk.q, blk.rho1));
        f.count = checked_mul(f.count, f.subset_counts.back(), "build_mcff");
    }
    f.selector = build_hitting_set(arity, k, 1.0 / 3.0, selector_mode, seed);
    f.count = checked_mul(f.count, u128(f.selector.points.size()), "build_mcff");

    StageNode& node = f.stage;
    node.name = "mcff";
    node.combine = "product";
    node.count = f.count;
    node.param("n", u128(n));
    node.param("blocks", u128(k));
    StageNode sel;
    sel.name = "selector";
    sel.count = f.selector.points.size();
    sel.param("arity", u128(arity));
    sel.param("k", u128(k));
    sel.param("mode", f.selector.mode);
    node.children.push_back(sel);
    for (u32 b = 0; b < k; ++b) {
        StageNode bn;
        bn.name = "block_subsets";
        bn.count = f.subset_counts[b];
        bn.param("q", u128(f.blocks[b].q));
        bn.param("rho1", u128(f.blocks[b].rho1));
        bn.param("rho2", u128(f.blocks[b].rho2));
        bn.param("hash_members", u128(f.hash_periods[b]));
        if (f.hash_periods[b] < arity) bn.param("hash_mode", "cyclic");
        node.children.push_back(bn);
    }
    if (stage) *stage = node;

    // Heuristic selectors carry no guarantee; accept them only once the
    // exhaustive check has passed.
    if (f.selector.mode == "heuristic-random") {
        if (auto w = verify_mcff(f)) {
            w->detail = "heuristic selector misses a pattern tuple; " + w->detail;
            throw VerificationFailed(std::move(*w));
        }
    }
    return f;
}

std::optional<Witness> verify_mcff(const McffFamily& f) {
    const u32 k = f.block_count();
    if (k == 0 || f.count == 0) throw InvalidParams("verify_mcff: empty family");
    if (f.count > (u128(1) << 22))
        throw CapacityError("verify_mcff: family too large for the exhaustive check");
    const u64 n = f.n;
    const u64 members = u64(f.count);
    const u64 words = (members + 63) / 64;

    struct PatternPair {
        std::vector<u32> ones, zeros;
    };
    std::vector<std::vector<PatternPair>> pairs(k);
    u128 sat_words = 0;
    for (u32 b = 0; b < k; ++b) {
        const u32 r1 = f.blocks[b].rho1, r2 = f.blocks[b].rho2;
        if (u64(r1) + r2 > n) throw InvalidParams("verify_mcff: rho1+rho2 exceeds the domain");
        const u128 cnt =
            checked_mul(binomial_u128(n, r1), binomial_u128(n - r1, r2), "verify_mcff");
        if (cnt > (u128(1) << 20)) throw CapacityError("verify_mcff: too many block patterns");
        sat_words = checked_add(sat_words, checked_mul(cnt, words, "verify_mcff"), "verify_mcff");
        std::vector<u32> a(r1);
        for (u32 i = 0; i < r1; ++i) a[i] = i;
        do {
            std::vector<u32> rest;
            rest.reserve(n - r1);
            for (u32 x = 0, j = 0; x < n; ++x) {
                if (j < r1 && a[j] == x)
                    ++j;
                else
                    rest.push_back(x);
            }
            std::vector<u32> pick(r2);
            for (u32 i = 0; i < r2; ++i) pick[i] = i;
            do {
                PatternPair p;
                for (u32 i : a) p.ones.push_back(i);
                for (u32 i : pick) p.zeros.push_back(rest[i]);
                pairs[b].push_back(std::move(p));
            } while (next_combination(pick, rest.size()));
        } while (next_combination(a, n));
    }
    if (sat_words > (u128(1) << 24))
        throw CapacityError("verify_mcff: pattern tables exceed the memory cap");

    // Which members satisfy each single-block pattern.
    std::vector<std::vector<std::vector<u64>>> sat(k);
    for (u32 b = 0; b < k; ++b)
        sat[b].assign(pairs[b].size(), std::vector<u64>(size_t(words), 0));
    std::vector<u32> vrow(static_cast<size_t>(n), 0);
    for (u64 m = 0; m < members; ++m) {
        const McffMember mem = f.decode(m);
        for (u32 b = 0; b < k; ++b) {
            for (u64 x = 0; x < n; ++x) vrow[size_t(x)] = f.hashes[b].at(mem.g[b], x);
            const auto& in_r = mem.in_r[b];
            for (size_t p = 0; p < pairs[b].size(); ++p) {
                bool ok = true;
                for (u32 x : pairs[b][p].ones)
                    if (!in_r[vrow[x] - 1]) {
                        ok = false;
                        break;
                    }
                if (ok)
                    for (u32 x : pairs[b][p].zeros)
                        if (in_r[vrow[x] - 1]) {
                            ok = false;
                            break;
                        }
                if (ok) sat[b][p][size_t(m / 64)] |= u64(1) << (m % 64);
            }
        }
    }

    // Depth-first over pattern tuples with running member intersections; an
    // empty prefix intersection already names an uncovered tuple.
    std::vector<std::vector<u64>> level(k + 1, std::vector<u64>(size_t(words), 0));
    for (u64 w = 0; w < words; ++w) level[0][size_t(w)] = ~u64(0);
    if (members % 64) level[0][size_t(words - 1)] = (u64(1) << (members % 64)) - 1;
    std::vector<size_t> path(k, 0);

    std::function<std::optional<Witness>(u32)> rec = [&](u32 b) -> std::optional<Witness> {
        for (size_t p = 0; p < pairs[b].size(); ++p) {
            path[b] = p;
            bool any = false;
            for (u64 w = 0; w < words; ++w) {
                level[b + 1][size_t(w)] = level[b][size_t(w)] & sat[b][p][size_t(w)];
                any = any || level[b + 1][size_t(w)];
            }
            if (!any) {
                Witness wt;
                wt.kind = "mcff";
                wt.detail = "no member realizes this tuple of block patterns";
                for (u32 i = 0; i < k; ++i) {
                    const auto& pp = pairs[i][i <= b ? path[i] : 0];
                    std::vector<u64> a1, b1;
                    for (u32 x : pp.ones) a1.push_back(u64(x) + 1);
                    for (u32 x : pp.zeros) b1.push_back(u64(x) + 1);
                    wt.blocks.emplace_back(std::move(a1), std::move(b1));
                }
                return wt;
            }
            if (b + 1 < k)
                if (auto wt = rec(b + 1)) return wt;
        }
        return std::nullopt;
    };
    return rec(0);
}

// ---------------------------------------------------------------------------
// Base construction
// ---------------------------------------------------------------------------

CffFamily build_base_cff(u64 n, u32 r, u32 s, StageNode* stage) {
    const u32 cols = checked_columns(n, "build_base_cff");
    if (r == 0 || s == 0) throw InvalidParams("build_base_cff: need r >= 1 and s >= 1");
    if (u64(r) + s > n) throw InvalidParams("build_base_cff: need r + s <= n");
    BaseSlice sl = make_base_slice(n, r, s);
    if (stage) *stage = sl.stage;
    const u128 total = sl.count;
    auto rows = std::make_shared<BaseCffRows>(n, std::move(sl));
    return CffFamily(cols, total, rows);
}

// ---------------------------------------------------------------------------
// Construction 1
// ---------------------------------------------------------------------------

namespace {

struct C1Bucket {
    u32 part = 0;
    std::vector<BaseSlice> variants;  // ascending load
    std::vector<u128> offsets;        // variants + 1 cumulative counts
    u128 size() const { return offsets.back(); }
};

struct C1Comp {
    std::vector<u32> parts;
    std::vector<C1Bucket> buckets;
    u128 tuple_space = 1;
};

/// Member layout, fastest to slowest: outer hash member, splitter member,
/// bucket-k slice tuple digit, ..., bucket-1 digit, composition.
struct Construction1Rows final : BitRowEvaluator {
    u64 n = 0, q = 0;
    u32 k = 0;
    FnFamily h1, h2;
    std::vector<C1Comp> comps;
    std::vector<u128> comp_offsets;  // inner-index starts (tuple_space * |h2| each)
    u128 inner_count = 0, outer_count = 0;

    mutable bool primed = false;
    mutable u128 cached_key = 0;
    mutable u32 cached_comp = 0;
    mutable std::vector<SliceState> cached_states;

    // Decode everything above the splitter digit once per tuple; consecutive
    // members share it (single-threaded use, like all row caches here).
    void prime(u128 inner) const {
        const u128 key = inner / h2.count();
        if (primed && key == cached_key) return;
        const u32 c =
            u32(std::upper_bound(comp_offsets.begin(), comp_offsets.end(), inner) -
                comp_offsets.begin()) -
            1;
        const auto& comp = comps[c];
        u128 tuple = (inner - comp_offsets[c]) / h2.count();
        cached_states.assign(k, {});
        for (u32 j = k; j-- > 0;) {
            const auto& bp = comp.buckets[j];
            const u128 tj = tuple % bp.size();
            tuple /= bp.size();
            const u32 v =
                u32(std::upper_bound(bp.offsets.begin(), bp.offsets.end(), tj) -
                    bp.offsets.begin()) -
                1;
            cached_states[j].assign(bp.variants[v], tj - bp.offsets[v]);
        }
        cached_comp = c;
        cached_key = key;
        primed = true;
    }

    bool bit(u128 member, u32 col) const override {
        const u128 outer = member % outer_count;
        const u128 inner = member / outer_count;
        prime(inner);
        const u128 sp = (inner - comp_offsets[cached_comp]) % h2.count();
        const u64 y = h1.at(outer, col) - 1;
        const u32 j = h2.at(sp, y) - 1;
        return cached_states[j].bit(y);
    }

    void fill_row(u128 member, u64* words, u32 cols) const override {
        const u128 outer = member % outer_count;
        const u128 inner = member / outer_count;
        prime(inner);
        const u128 sp = (inner - comp_offsets[cached_comp]) % h2.count();
        const u32 nw = (cols + 63) / 64;
        for (u32 w = 0; w < nw; ++w) words[w] = 0;
        for (u32 x = 0; x < cols; ++x) {
            const u64 y = h1.at(outer, x) - 1;
            const u32 j = h2.at(sp, y) - 1;
            if (cached_states[j].bit(y)) words[x / 64] |= u64(1) << (x % 64);
        }
    }
};

struct OuterSkeleton {
    u32 d = 0;
    u64 q = 0;
    u32 k_eff = 0;
    FnFamily h1, h2;
    StageNode phf_stage, split_stage;
};

OuterSkeleton build_skeleton(u64 n, u32 r, u32 s, u32 k, const char* what) {
    checked_columns(n, what);
    if (r == 0 || s == 0) throw InvalidParams(std::string(what) + ": need r >= 1 and s >= 1");
    if (r > s)
        throw InvalidParams(std::string(what) +
                            ": needs r <= s; build the (s,r) family and complement it");
    if (u64(r) + s > n) throw InvalidParams(std::string(what) + ": need r + s <= n");
    if (k == 0 || k > r) throw InvalidParams(std::string(what) + ": need 1 <= k <= r");
    OuterSkeleton sk;
    sk.d = r + s;
    const u64 cube = u64(sk.d) * sk.d * sk.d;
    const auto q = smallest_prime_power_in(cube, 2 * cube);
    if (!q) throw CapacityError(std::string(what) + ": no prime power in (d^3, 2d^3]");
    sk.q = *q;
    sk.k_eff = u32(largest_divisor_le(r, k));
    sk.h1 = build_phf(n, sk.q, sk.d, false, &sk.phf_stage);
    sk.h2 = build_splitter(sk.q, r, sk.k_eff, &sk.split_stage);
    return sk;
}

StageNode top_stage(const char* name, u64 n, u32 r, u32 s, u32 k, const OuterSkeleton& sk,
                    StageNode comps_node, u128 total) {
    StageNode top;
    top.name = name;
    top.combine = "product";
    top.count = total;
    top.param("n", u128(n));
    top.param("r", u128(r));
    top.param("s", u128(s));
    top.param("q", u128(sk.q));
    top.param("k_requested", u128(k));
    top.param("k_effective", u128(sk.k_eff));
    top.children = {sk.phf_stage, sk.split_stage, std::move(comps_node)};
    return top;
}

}  // namespace

CffFamily build_cff_construction1(u64 n, u32 r, u32 s, u32 k, StageNode* stage) {
    OuterSkeleton sk = build_skeleton(n, r, s, k, "construction1");
    const u32 lb = r / sk.k_eff;
    const u32 ub = (r + sk.k_eff - 1) / sk.k_eff;  // == lb (k_eff divides r); kept general

    auto rows = std::make_shared<Construction1Rows>();
    rows->n = n;
    rows->q = sk.q;
    rows->k = sk.k_eff;
    rows->h1 = sk.h1;
    rows->h2 = sk.h2;
    rows->outer_count = sk.h1.count();
    rows->comp_offsets.push_back(0);

    StageNode comps_node;
    comps_node.name = "compositions";
    comps_node.combine = "sum";
    comps_node.param("d", u128(sk.d));
    comps_node.param("parts", u128(sk.k_eff));
    comps_node.param("min_part", u128(lb));

    u128 comps_sum = 0;
    CompositionList comps_def(sk.d, sk.k_eff, lb);
    auto comp = comps_def.first();
    do {
        C1Comp cp;
        cp.parts = comp;
        StageNode comp_node;
        comp_node.name = "composition";
        comp_node.combine = "product";
        comp_node.param("parts", join_u32(comp));
        for (u32 j = 0; j < sk.k_eff; ++j) {
            C1Bucket bp;
            bp.part = comp[j];
            bp.offsets.push_back(0);
            StageNode bucket_node;
            bucket_node.name = "bucket";
            bucket_node.combine = "sum";
            bucket_node.param("index", u128(j + 1));
            bucket_node.param("columns", u128(comp[j]));
            std::vector<u32> loads = {lb};
            if (ub != lb) loads.push_back(ub);
            for (u32 load : loads) {
                if (load > comp[j]) continue;
                BaseSlice sl = make_base_slice(sk.q, load, comp[j] - load);
                bp.offsets.push_back(checked_add(bp.offsets.back(), sl.count, "construction1"));
                bucket_node.children.push_back(sl.stage);
                bp.variants.push_back(std::move(sl));
            }
            bucket_node.count = bp.size();
            cp.tuple_space = checked_mul(cp.tuple_space, bp.size(), "construction1");
            comp_node.children.push_back(std::move(bucket_node));
            cp.buckets.push_back(std::move(bp));
        }
        comp_node.count = cp.tuple_space;
        comps_sum = checked_add(comps_sum, cp.tuple_space, "construction1");
        comps_node.children.push_back(std::move(comp_node));
        rows->comp_offsets.push_back(checked_add(
            rows->comp_offsets.back(),
            checked_mul(cp.tuple_space, sk.h2.count(), "construction1"), "construction1"));
        rows->comps.push_back(std::move(cp));
    } while (comps_def.next(comp));
    rows->inner_count = rows->comp_offsets.back();
    comps_node.count = comps_sum;

    const u128 total = checked_mul(rows->inner_count, rows->outer_count, "construction1");
    if (stage) *stage = top_stage("construction1", n, r, s, k, sk, std::move(comps_node), total);
    return CffFamily(u32(n), total, rows);
}

// ---------------------------------------------------------------------------
// Construction 2
// ---------------------------------------------------------------------------

namespace {

struct C2Unit {
    std::vector<u32> loads;
    std::vector<int> block_of;  // bucket -> block index in the unit's family, -1 = always-on
    McffFamily mcff;
};

struct C2Comp {
    std::vector<u32> parts;
    std::vector<C2Unit> units;
    std::vector<u128> unit_offsets;
    u128 tuple_space() const { return unit_offsets.back(); }
};

/// Same outer layout as construction 1; the per-composition tuple digit now
/// ranges over the concatenated multi-block families, one per load vector.
struct Construction2Rows final : BitRowEvaluator {
    u64 n = 0, q = 0;
    u32 k = 0;
    FnFamily h1, h2;
    std::vector<C2Comp> comps;
    std::vector<u128> comp_offsets;
    u128 inner_count = 0, outer_count = 0;

    mutable bool primed = false;
    mutable u128 cached_key = 0;
    mutable u32 cached_comp = 0, cached_unit = 0;
    mutable McffMember cached_member;

    void prime(u128 inner) const {
        const u128 key = inner / h2.count();
        if (primed && key == cached_key) return;
        const u32 c =
            u32(std::upper_bound(comp_offsets.begin(), comp_offsets.end(), inner) -
                comp_offsets.begin()) -
            1;
        const auto& comp = comps[c];
        const u128 tuple = (inner - comp_offsets[c]) / h2.count();
        const u32 u =
            u32(std::upper_bound(comp.unit_offsets.begin(), comp.unit_offsets.end(), tuple) -
                comp.unit_offsets.begin()) -
            1;
        cached_member = comp.units[u].mcff.decode(tuple - comp.unit_offsets[u]);
        cached_comp = c;
        cached_unit = u;
        cached_key = key;
        primed = true;
    }

    bool bit(u128 member, u32 col) const override {
        const u128 outer = member % outer_count;
        const u128 inner = member / outer_count;
        prime(inner);
        const auto& unit = comps[cached_comp].units[cached_unit];
        const u128 sp = (inner - comp_offsets[cached_comp]) % h2.count();
        const u64 y = h1.at(outer, col) - 1;
        const u32 j = h2.at(sp, y) - 1;
        const int b = unit.block_of[j];
        return b < 0 || unit.mcff.bit(cached_member, u32(b), y);
    }

    void fill_row(u128 member, u64* words, u32 cols) const override {
        const u128 outer = member % outer_count;
        const u128 inner = member / outer_count;
        prime(inner);
        const auto& unit = comps[cached_comp].units[cached_unit];
        const u128 sp = (inner - comp_offsets[cached_comp]) % h2.count();
        const u32 nw = (cols + 63) / 64;
        for (u32 w = 0; w < nw; ++w) words[w] = 0;
        for (u32 x = 0; x < cols; ++x) {
            const u64 y = h1.at(outer, x) - 1;
            const u32 j = h2.at(sp, y) - 1;
            const int b = unit.block_of[j];
            if (b < 0 || unit.mcff.bit(cached_member, u32(b), y))
                words[x / 64] |= u64(1) << (x % 64);
        }
    }
};

}  // namespace

CffFamily build_cff_construction2(u64 n, u32 r, u32 s, u32 k, StageNode* stage) {
    OuterSkeleton sk = build_skeleton(n, r, s, k, "construction2");
    const u32 lb = r / sk.k_eff;
    const u32 rem = r % sk.k_eff;  // == 0 (k_eff divides r); kept general

    auto rows = std::make_shared<Construction2Rows>();
    rows->n = n;
    rows->q = sk.q;
    rows->k = sk.k_eff;
    rows->h1 = sk.h1;
    rows->h2 = sk.h2;
    rows->outer_count = sk.h1.count();
    rows->comp_offsets.push_back(0);

    StageNode comps_node;
    comps_node.name = "compositions";
    comps_node.combine = "sum";
    comps_node.param("d", u128(sk.d));
    comps_node.param("parts", u128(sk.k_eff));
    comps_node.param("min_part", u128(lb));

    u128 comps_sum = 0;
    CompositionList comps_def(sk.d, sk.k_eff, lb);
    auto comp = comps_def.first();
    do {
        C2Comp cp;
        cp.parts = comp;
        cp.unit_offsets.push_back(0);
        StageNode comp_node;
        comp_node.name = "composition";
        comp_node.combine = "sum";
        comp_node.param("parts", join_u32(comp));

        std::vector<u32> up(rem);
        for (u32 i = 0; i < rem; ++i) up[i] = i;
        bool more = true;
        while (more) {
            std::vector<u32> loads(sk.k_eff, lb);
            for (u32 i : up) loads[i] = lb + 1;
            bool feasible = true;
            for (u32 j = 0; j < sk.k_eff && feasible; ++j) feasible = loads[j] <= comp[j];
            if (feasible) {
                C2Unit unit;
                unit.loads = loads;
                unit.block_of.assign(sk.k_eff, -1);
                MultiCffSpec ms;
                for (u32 j = 0; j < sk.k_eff; ++j) {
                    if (comp[j] > loads[j]) {
                        unit.block_of[j] = int(ms.blocks.size());
                        ms.blocks.push_back({loads[j], comp[j] - loads[j], 0});
                    }
                }
                StageNode unit_node;
                unit_node.name = "load_vector";
                unit_node.combine = "product";
                unit_node.param("loads", join_u32(loads));
                StageNode mstage;
                unit.mcff = build_mcff(sk.q, ms, "exact-product", kHittingSetSeed, &mstage);
                unit_node.count = unit.mcff.count;
                unit_node.children.push_back(std::move(mstage));
                for (u32 j = 0; j < sk.k_eff; ++j)
                    if (unit.block_of[j] < 0) {
                        StageNode ao;
                        ao.name = "all_ones";
                        ao.count = 1;
                        ao.param("bucket", u128(j + 1));
                        unit_node.children.push_back(std::move(ao));
                    }
                cp.unit_offsets.push_back(
                    checked_add(cp.unit_offsets.back(), unit.mcff.count, "construction2"));
                comp_node.children.push_back(std::move(unit_node));
                cp.units.push_back(std::move(unit));
            }
            more = rem == 0 ? false : next_combination(up, sk.k_eff);
        }
        comp_node.count = cp.tuple_space();
        comps_sum = checked_add(comps_sum, cp.tuple_space(), "construction2");
        comps_node.children.push_back(std::move(comp_node));
        rows->comp_offsets.push_back(checked_add(
            rows->comp_offsets.back(),
            checked_mul(cp.tuple_space(), sk.h2.count(), "construction2"), "construction2"));
        rows->comps.push_back(std::move(cp));
    } while (comps_def.next(comp));
    rows->inner_count = rows->comp_offsets.back();
    comps_node.count = comps_sum;

    const u128 total = checked_mul(rows->inner_count, rows->outer_count, "construction2");
    if (stage) *stage = top_stage("construction2", n, r, s, k, sk, std::move(comps_node), total);
    return CffFamily(u32(n), total, rows);
}

// ---------------------------------------------------------------------------
// Regime dispatch
// ---------------------------------------------------------------------------

namespace {

struct ComplementRows final : BitRowEvaluator {
    CffFamily base;
    explicit ComplementRows(CffFamily b) : base(std::move(b)) {}
    bool bit(u128 member, u32 col) const override { return !base.bit(member, col); }
    void fill_row(u128 member, u64* words, u32 cols) const override {
        const u32 nw = (cols + 63) / 64;
        for (u32 w = 0; w < nw; ++w) words[w] = 0;
        for (u32 x = 0; x < cols; ++x)
            if (!base.bit(member, x)) words[x / 64] |= u64(1) << (x % 64);
    }
};

}  // namespace

CffBuild build_cff(u64 n, u32 r, u32 s, const BuildOptions& opt) {
    checked_columns(n, "build_cff");
    if (r == 0 || s == 0) throw InvalidParams("build_cff: need r >= 1 and s >= 1");
    if (u64(r) + s > n) throw InvalidParams("build_cff: need r + s <= n");
    if (!opt.regime.empty() && opt.regime != "base" && opt.regime != "construction1" &&
        opt.regime != "construction2")
        throw InvalidParams("build_cff: unknown regime '" + opt.regime + "'");

    const bool flipped = r > s;
    const u32 rn = flipped ? s : r;
    const u32 sn = flipped ? r : s;
    const u32 d = r + s;
    const double ld = std::log2(double(d));

    std::string regime = opt.regime;
    if (regime.empty()) {
        const u32 base_cut = std::max<u32>(2, u32(std::ceil(ld * ld)));
        const u64 cld = u64(std::ceil(ld));
        if (rn <= base_cut)
            regime = "base";
        else if (u64(rn) * cld * cld >= d)
            regime = "construction2";
        else
            regime = "construction1";
    }

    u32 k = opt.k;
    if (regime != "base" && k == 0) {
        double divisor;
        if (opt.phi > 0)
            divisor = opt.phi;
        else if (regime == "construction2")
            divisor = std::max(1.0, std::ceil(std::log2(ld)));
        else
            divisor = std::max(1.0, std::log2(ld));
        k = u32(std::llround(double(rn) / divisor));
    }
    if (k == 0) k = 1;
    if (k > rn) k = rn;

    StageNode tree;
    CffFamily fam;
    if (regime == "base")
        fam = build_base_cff(n, rn, sn, &tree);
    else if (regime == "construction1")
        fam = build_cff_construction1(n, rn, sn, k, &tree);
    else
        fam = build_cff_construction2(n, rn, sn, k, &tree);

    std::string regime_name = regime;
    if (flipped) {
        regime_name = "complement+" + regime;
        StageNode comp_node;
        comp_node.name = "complement";
        comp_node.combine = "product";
        comp_node.count = tree.count;
        comp_node.children = {std::move(tree)};
        tree = std::move(comp_node);
        if (fam.materialized())
            fam = CffFamily(fam.dense().complemented());
        else
            fam = CffFamily(fam.n(), fam.count(), std::make_shared<ComplementRows>(fam));
    }

    if (opt.materialize && !fam.materialized() && fam.count() <= materialization_cap())
        fam = CffFamily(fam.materialize());

    SizeReport rep = make_size_report({n, r, s}, regime_name, std::move(tree));
    return {std::move(fam), std::move(rep)};
}

}  // namespace cffkit
