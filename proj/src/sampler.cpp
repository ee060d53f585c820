#include "cffkit/sampler.hpp"

#include <random>

#include "cffkit/verify.hpp"

namespace cffkit {

namespace {

u64 mix_seed(u64 seed, u64 n, u32 r, u32 s) {
  return seed ^ (n * 0x9e3779b97f4a7c15ULL) ^ (((u64(r) << 32) | s) * 0xbf58476d1ce4e5b9ULL);
}

}  // namespace

BitFamily sample_cff(u64 n, u32 r, u32 s, u64 seed, u64 max_rows) {
  if (n == 0 || r == 0 || s == 0) throw InvalidParams("sample_cff: n, r, s must be positive");
  if (n > 0xFFFFFFFFull) throw InvalidParams("sample_cff: n exceeds the column limit");
  if (u64(r) + u64(s) > n) throw InvalidParams("sample_cff: needs r + s <= n");

  std::mt19937_64 eng(mix_seed(seed, n, r, s));
  // Threshold comparison on the top 53 bits keeps the draw exact for the
  // rational density r/(r+s) up to one part in 2^53.
  const double p = double(r) / (double(r) + double(s));
  const u64 threshold = u64(p * 9007199254740992.0);  // p * 2^53
  auto draw_bit = [&]() -> bool { return (eng() >> 11) < threshold; };

  BitFamily fam(static_cast<u32>(n));
  u64 batch = 64;
  u64 drawn = 0;
  while (true) {
    u64 take = std::min(batch, max_rows - drawn);
    for (u64 i = 0; i < take; ++i) {
      fam.append_row_zero();
      const u64 row = fam.rows() - 1;
      for (u32 x = 0; x < u32(n); ++x)
        if (draw_bit()) fam.set_bit(row, x);
    }
    drawn += take;
    if (!verify_cff(fam, r, s)) return fam;
    if (drawn >= max_rows)
      throw CapacityError("sample_cff: no verifying family within " + std::to_string(max_rows) +
                          " rows");
    batch *= 2;
  }
}

}  // namespace cffkit
