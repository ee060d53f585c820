#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cffkit {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Bad arguments to a build or verify call (precondition violations).
struct InvalidParams : std::invalid_argument {
    explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

/// A request that would exceed materialization or index-arithmetic limits.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

std::string to_string_u128(u128 v);
u128 parse_u128(const std::string& s);

/// Multiply with overflow check; throws CapacityError on overflow.
u128 checked_mul(u128 a, u128 b, const char* context = "size arithmetic");
u128 checked_add(u128 a, u128 b, const char* context = "size arithmetic");
u128 checked_pow(u128 base, u32 exp, const char* context = "size arithmetic");

/// Row cap above which families stay lazy. Default 2^24; the environment
/// variable CFFKIT_MAT_CAP overrides it process-wide.
u64 materialization_cap();
void set_materialization_cap(u64 cap);

}  // namespace cffkit
