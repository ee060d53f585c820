#pragma once

#include <vector>

#include "cffkit/common.hpp"

namespace cffkit {

/// Arithmetic in the finite field of prime-power order q = p^e.
///
/// Elements are encoded as integers in [0, q): the base-p digits of the
/// encoding are the coordinates in the polynomial basis. The modulus is the
/// lexicographically least monic irreducible of degree e, so a given q always
/// produces the same field tables.
class Gf {
public:
    explicit Gf(u64 q);

    u64 q() const { return q_; }
    u64 p() const { return p_; }
    u32 e() const { return e_; }

    u32 add(u32 a, u32 b) const;
    u32 mul(u32 a, u32 b) const;

    /// Monic modulus coefficients, constant term first (size e+1; empty for e=1).
    const std::vector<u32>& modulus() const { return mod_; }

private:
    u64 q_ = 0, p_ = 0;
    u32 e_ = 0;
    std::vector<u32> mod_;
    std::vector<u32> mul_table_;  // q*q lookup when q is small, else empty

    u32 mul_slow(u32 a, u32 b) const;
};

}  // namespace cffkit
