#include "cffkit/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace cffkit {

bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (u64 f = 5; f * f <= n; f += 6) {
        if (n % f == 0 || n % (f + 2) == 0) return false;
    }
    return true;
}

std::optional<std::pair<u64, u32>> prime_power_decompose(u64 n) {
    if (n < 2) return std::nullopt;
    // Find the smallest prime factor; n is a prime power iff it is the only one.
    u64 p = 0;
    if (n % 2 == 0) {
        p = 2;
    } else {
        for (u64 f = 3; f * f <= n; f += 2) {
            if (n % f == 0) {
                p = f;
                break;
            }
        }
        if (p == 0) return std::make_pair(n, 1u);  // n itself prime
    }
    u32 e = 0;
    u64 m = n;
    while (m % p == 0) {
        m /= p;
        ++e;
    }
    if (m != 1) return std::nullopt;
    return std::make_pair(p, e);
}

std::optional<u64> smallest_prime_power_in(u64 lo, u64 hi) {
    for (u64 q = lo + 1; q <= hi; ++q) {
        if (is_prime_power(q)) return q;
    }
    return std::nullopt;
}

u64 next_prime_power_above(u64 lo) {
    for (u64 q = lo + 1;; ++q) {
        if (is_prime_power(q)) return q;
    }
}

u128 binomial_u128(u64 n, u64 k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (u64 i = 1; i <= k; ++i) {
        // r * (n-k+i) is divisible by i once the first i factors are in.
        r = checked_mul(r, n - k + i, "binomial");
        r /= i;
    }
    return r;
}

double log2_binomial(u64 n, u64 k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    double ln = std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
                std::lgamma(double(n - k) + 1.0);
    return ln / std::log(2.0);
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

bool next_combination(std::vector<u32>& c, u64 n) {
    const u64 k = c.size();
    if (k == 0) return false;
    // Find rightmost slot that can still move right.
    for (u64 i = k; i-- > 0;) {
        if (c[i] + (k - i) < n) {
            ++c[i];
            for (u64 j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<u32> unrank_combination(u64 n, u64 k, u128 rank) {
    std::vector<u32> out;
    out.reserve(k);
    u64 next = 0;
    for (u64 slot = 0; slot < k; ++slot) {
        u64 remaining = k - slot;
        for (u64 v = next;; ++v) {
            u128 block = binomial_u128(n - v - 1, remaining - 1);
            if (rank < block) {
                out.push_back(u32(v));
                next = v + 1;
                break;
            }
            rank -= block;
            if (v + remaining > n) throw InvalidParams("unrank_combination: rank out of range");
        }
    }
    return out;
}

u128 rank_combination(u64 n, const std::vector<u32>& c) {
    u128 rank = 0;
    u64 prev = 0;
    const u64 k = c.size();
    for (u64 slot = 0; slot < k; ++slot) {
        for (u64 v = prev; v < c[slot]; ++v)
            rank = checked_add(rank, binomial_u128(n - v - 1, k - slot - 1), "rank_combination");
        prev = c[slot] + 1;
    }
    return rank;
}

u64 largest_divisor_le(u64 r, u64 k) {
    if (r == 0) throw InvalidParams("largest_divisor_le: r must be positive");
    k = std::min(k, r);
    for (u64 d = k; d >= 1; --d) {
        if (r % d == 0) return d;
    }
    return 1;
}

u64 nearest_divisor(u64 k, double z) {
    if (k == 0) throw InvalidParams("nearest_divisor: k must be positive");
    // Ascending scan: on a tie the smaller divisor is kept.
    u64 best = 1;
    double best_gap = std::abs(z - 1.0);
    for (u64 d = 2; d <= k; ++d) {
        if (k % d != 0) continue;
        double gap = std::abs(z - double(d));
        if (gap < best_gap - 1e-12) {
            best = d;
            best_gap = gap;
        }
    }
    return best;
}

}  // namespace cffkit
