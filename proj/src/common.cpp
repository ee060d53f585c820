#include "cffkit/common.hpp"

#include <cstdlib>

namespace cffkit {

std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return {out.rbegin(), out.rend()};
}

u128 parse_u128(const std::string& s) {
    if (s.empty()) throw InvalidParams("parse_u128: empty string");
    u128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw InvalidParams("parse_u128: non-digit in '" + s + "'");
        u128 next = v * 10 + u128(c - '0');
        if (next / 10 != v) throw CapacityError("parse_u128: overflow in '" + s + "'");
        v = next;
    }
    return v;
}

u128 checked_mul(u128 a, u128 b, const char* context) {
    if (a == 0 || b == 0) return 0;
    u128 r = a * b;
    if (r / a != b)
        throw CapacityError(std::string(context) + ": product exceeds 128-bit range");
    return r;
}

u128 checked_add(u128 a, u128 b, const char* context) {
    u128 r = a + b;
    if (r < a) throw CapacityError(std::string(context) + ": sum exceeds 128-bit range");
    return r;
}

u128 checked_pow(u128 base, u32 exp, const char* context) {
    u128 r = 1;
    for (u32 i = 0; i < exp; ++i) r = checked_mul(r, base, context);
    return r;
}

namespace {

u64 initial_cap() {
    if (const char* env = std::getenv("CFFKIT_MAT_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return u64(1) << 24;
}

u64 g_cap = initial_cap();

}  // namespace

u64 materialization_cap() { return g_cap; }
void set_materialization_cap(u64 cap) { g_cap = cap == 0 ? 1 : cap; }

}  // namespace cffkit
