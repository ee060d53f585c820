#include "cffkit/gf.hpp"

#include <algorithm>

#include "cffkit/numeric.hpp"

namespace cffkit {

namespace {

using Poly = std::vector<u32>;  // coefficients mod p, constant term first

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of a mod b over F_p (b nonzero, monic not required).
Poly poly_mod(Poly a, const Poly& b, u64 p) {
    trim(a);
    while (a.size() >= b.size()) {
        // b is monic in our usage, so no inverse needed.
        u64 lead = a.back();
        u64 shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) {
            u64 sub = (lead * b[i]) % p;
            u64 pos = shift + i;
            a[pos] = u32((a[pos] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

bool divides(const Poly& g, const Poly& f, u64 p) {
    Poly r = poly_mod(f, g, p);
    return r.empty();
}

// f monic of degree e >= 2: irreducible iff no monic divisor of degree 1..e/2.
bool is_irreducible(const Poly& f, u64 p) {
    const u32 e = u32(f.size() - 1);
    for (u32 dg = 1; dg <= e / 2; ++dg) {
        u64 count = 1;
        for (u32 i = 0; i < dg; ++i) count *= p;
        for (u64 t = 0; t < count; ++t) {
            Poly g(dg + 1, 0);
            u64 v = t;
            for (u32 i = 0; i < dg; ++i) {
                g[i] = u32(v % p);
                v /= p;
            }
            g[dg] = 1;
            if (divides(g, f, p)) return false;
        }
    }
    return true;
}

Poly least_irreducible(u64 p, u32 e) {
    u64 count = 1;
    for (u32 i = 0; i < e; ++i) count *= p;
    for (u64 t = 0; t < count; ++t) {
        Poly f(e + 1, 0);
        u64 v = t;
        for (u32 i = 0; i < e; ++i) {
            f[i] = u32(v % p);
            v /= p;
        }
        f[e] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw InvalidParams("least_irreducible: none found (unreachable)");
}

}  // namespace

Gf::Gf(u64 q) : q_(q) {
    auto pe = prime_power_decompose(q);
    if (!pe) throw InvalidParams("Gf: order " + std::to_string(q) + " is not a prime power");
    p_ = pe->first;
    e_ = pe->second;
    if (e_ > 1) mod_ = least_irreducible(p_, e_);
    if (q_ <= 1024) {
        mul_table_.resize(size_t(q_) * q_);
        for (u64 a = 0; a < q_; ++a)
            for (u64 b = 0; b < q_; ++b) mul_table_[a * q_ + b] = mul_slow(u32(a), u32(b));
    }
}

u32 Gf::add(u32 a, u32 b) const {
    if (e_ == 1) return u32((u64(a) + b) % p_);
    u32 out = 0;
    u64 scale = 1;
    for (u32 i = 0; i < e_; ++i) {
        u64 da = (a / scale) % p_;
        u64 db = (b / scale) % p_;
        out += u32(((da + db) % p_) * scale);
        scale *= p_;
    }
    return out;
}

u32 Gf::mul(u32 a, u32 b) const {
    if (!mul_table_.empty()) return mul_table_[u64(a) * q_ + b];
    return mul_slow(a, b);
}

u32 Gf::mul_slow(u32 a, u32 b) const {
    if (e_ == 1) return u32((u64(a) * b) % p_);
    Poly da(e_, 0), db(e_, 0);
    u64 va = a, vb = b;
    for (u32 i = 0; i < e_; ++i) {
        da[i] = u32(va % p_);
        va /= p_;
        db[i] = u32(vb % p_);
        vb /= p_;
    }
    Poly prod(2 * e_ - 1, 0);
    for (u32 i = 0; i < e_; ++i) {
        if (da[i] == 0) continue;
        for (u32 j = 0; j < e_; ++j)
            prod[i + j] = u32((prod[i + j] + u64(da[i]) * db[j]) % p_);
    }
    Poly r = poly_mod(std::move(prod), mod_, p_);
    u32 out = 0;
    u64 scale = 1;
    for (size_t i = 0; i < r.size(); ++i) {
        out += u32(r[i] * scale);
        scale *= p_;
    }
    return out;
}

}  // namespace cffkit
