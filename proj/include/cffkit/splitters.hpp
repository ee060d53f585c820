#pragma once

#include <optional>

#include "cffkit/fn_family.hpp"
#include "cffkit/report.hpp"
#include "cffkit/witness.hpp"

namespace cffkit {

/// Real-valued splitter growth parameters plus the divisor-rounded integer
/// triple (z_eff | k_eff | r) actually usable by the recursive construction.
/// All logarithms base 2.
struct SplitterParams {
    u64 r = 0, k = 0;  // as requested
    u64 k_eff = 0;     // largest divisor of r at most k
    u64 z_eff = 0;     // divisor of k_eff nearest to z (ties downward), at least 1
    double sigma = 0.0;       // (2*pi*r/k)^(k/2) * e^(k^2/(12r)); inf if out of double range
    double sigma_log2 = 0.0;
    double z = 0.0;           // 16*r*log2(k) / (k*log2(4r/k))
};

SplitterParams splitter_params(u64 r, u64 k);

double sigma_log2_real(double r, double k);
double z_real(double r, double k);

/// Greedy (m,r,k)-splitter on a small domain: every r-subset gets bucket
/// loads floor(r/k) or ceil(r/k) under some member. Candidates are degree-
/// (r-1) polynomials over the smallest prime field >= m, reduced onto [k] by
/// balanced intervals; each round keeps the earliest candidate of maximum
/// gain. The result is verified exhaustively before returning.
FnFamily build_splitter_base(u64 m, u64 r, u64 k, StageNode* stage = nullptr);

std::optional<Witness> verify_splitter(const FnFamily& h, u64 r, u64 k);

/// (n,r,k)-splitter. Small r dispatches to the greedy base behind a perfect
/// hash; larger r runs the recursive pipeline: a tiny base splitter, lifted,
/// stitched piecewise with bucket offsets, then composed with an outer
/// perfect hash. k is rounded down to a divisor of r (recorded in `stage`).
FnFamily build_splitter(u64 n, u64 r, u64 k, StageNode* stage = nullptr);

/// Numeric diagnostics for the growth functions: the z profile on a geometric
/// k-grid of [sqrt(r), r], endpoint closed forms, and cost/count ratios (log2
/// domain) at a reference k. No asymptotic claims, just the numbers. The two
/// ratio fields are NaN when r/z(r,k_ref) drops below 2.
struct SplitterScalingReport {
    u64 r = 0;
    u64 k_ref = 0;
    std::vector<std::pair<double, double>> z_samples;  // (k, z(r,k))
    bool z_strictly_decreasing = false;
    double z_at_sqrt = 0.0;         // z(r, sqrt(r))
    double z_at_sqrt_closed = 0.0;  // 16*sqrt(r)*log2(sqrt(r))/log2(4*sqrt(r))
    double z_sqrt_ceiling = 0.0;    // 16*sqrt(r); z_at_sqrt stays below it
    double z_at_full = 0.0;         // z(r, r)
    double z_at_full_closed = 0.0;  // 8*log2(r)
    double base_cost_log2_ratio = 0.0;   // log2(base-stage cost / sigma(r,k))
    double stitched_count_exponent = 0.0;  // log_r(stitched count bound / sigma) / z
    double poly_vs_sigma_ratio = 0.0;      // z*log2(r) / log2(sigma)
};

SplitterScalingReport splitter_scaling_report(u64 r, u64 k_ref, u32 samples = 32);

}  // namespace cffkit
