#pragma once

#include <optional>
#include <vector>

#include "cffkit/common.hpp"

namespace cffkit {

bool is_prime(u64 n);

/// If n = p^e for a prime p and e >= 1, returns (p, e).
std::optional<std::pair<u64, u32>> prime_power_decompose(u64 n);
inline bool is_prime_power(u64 n) { return prime_power_decompose(n).has_value(); }

/// Smallest prime power q with lo < q <= hi, if any.
std::optional<u64> smallest_prime_power_in(u64 lo, u64 hi);

/// Smallest prime power strictly greater than lo (never fails for sane lo).
u64 next_prime_power_above(u64 lo);

/// C(n,k) with overflow checking.
u128 binomial_u128(u64 n, u64 k);
double log2_binomial(u64 n, u64 k);

/// -p*log2(p) - (1-p)*log2(1-p), with H(0)=H(1)=0.
double binary_entropy(double p);

/// Lexicographically next k-combination of {0,...,n-1}; false when exhausted.
bool next_combination(std::vector<u32>& c, u64 n);

/// rank-th k-combination of {0,...,n-1} in lexicographic order.
std::vector<u32> unrank_combination(u64 n, u64 k, u128 rank);
u128 rank_combination(u64 n, const std::vector<u32>& c);

/// Largest divisor of r that is <= k (k >= 1). Always >= 1.
u64 largest_divisor_le(u64 r, u64 k);

/// Divisor of k nearest to the real value z (ties resolved downward).
u64 nearest_divisor(u64 k, double z);

}  // namespace cffkit
