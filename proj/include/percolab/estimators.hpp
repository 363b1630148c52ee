#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/oracle.hpp"

namespace percolab {

// Proportion estimate with Wilson interval bounds.
struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
};

Estimate proportion_estimate(std::uint64_t successes, std::uint64_t samples, double ci_z);

// Two-sided normal quantile for a confidence level in (0,1), e.g. 0.95 -> 1.96.
double normal_quantile_two_sided(double level);

// Paired successive difference tau_hat(n) - tau_hat(n+1), accounted on the
// same sampled configurations. n_plus counts samples with I_n=1, I_{n+1}=0;
// n_minus the reverse; n_both counts I_n=1, I_{n+1}=1 (used for ratio
// covariance). mean_diff = (n_plus - n_minus)/samples exactly.
struct PairDiff {
    int n = 0;
    double mean_diff = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n_plus = 0;
    std::uint64_t n_minus = 0;
    std::uint64_t n_both = 0;
};

struct PairedCurve {
    double p = 0.0;
    EventKind kind = EventKind::two_point;
    std::uint64_t samples = 0;
    std::vector<int> ns;
    std::vector<Estimate> entries;
    std::vector<PairDiff> diffs; // for consecutive n present in ns
};

struct CurveParams {
    double p = 0.5;
    std::vector<int> ns;
    EventKind kind = EventKind::two_point;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    int workers = 1;
    double ci_level = 0.95;
};

// Monte Carlo estimate of the connectivity curve. Sample s draws its marks
// from RngStream{seed, s} lazily during cluster growth from the origin (the
// counter generator makes lazy and eager marks identical). All reductions
// are integer counts, so results are independent of the worker count.
PairedCurve estimate_curve(const LatticeGraph& g, const CurveParams& params);
PairedCurve estimate_curve(const BoxSpec& spec, const CurveParams& params);

// Occupation-number sweep estimator for increasing events: each sweep draws
// a uniform random bond permutation and records, per target n, the smallest
// number of added bonds at which the event first holds; the p-curve follows
// by binomial convolution with log-space weights. Refuses truncated events
// (not monotone in the bond count).
struct SweepCurvePoint {
    int n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct SweepFamily {
    std::vector<double> p_grid;
    std::vector<int> ns;
    std::uint64_t sweeps = 0;
    // curves[i] holds the points for p_grid[i].
    std::vector<std::vector<SweepCurvePoint>> curves;
};

SweepFamily sweep_estimate(const LatticeGraph& g, const std::vector<int>& n_list,
                           const std::vector<double>& p_grid, std::uint64_t sweeps,
                           std::uint64_t seed, EventKind kind = EventKind::two_point);
SweepFamily sweep_estimate(const BoxSpec& spec, const std::vector<int>& n_list,
                           const std::vector<double>& p_grid, std::uint64_t sweeps,
                           std::uint64_t seed, EventKind kind = EventKind::two_point);

// Correlation-length regression input/output.
struct CurvePoint {
    int n = 0;
    double value = 0.0;
    double stderr_ = 0.0;
};

struct XiModel {
    bool oz_corrected = false;
    double nu = 0.0; // fixed power of the 1/n^nu correction when oz_corrected

    static XiModel pure_exponential() { return {false, 0.0}; }
    static XiModel oz(double nu) { return {true, nu}; }
};

struct XiEstimate {
    double xi = 0.0;
    double stderr_ = 0.0;
    double amplitude = 0.0; // exp(intercept)
    int window_lo = 0;
    int window_hi = 0;
    XiModel model;
    std::vector<double> residuals; // log-space, one per window point
};

// Weighted least squares of log value against n: pure_exponential fits
// log v = log A - n/xi; oz_corrected(nu) fits log v = log A - n/xi - nu log n.
// Weights are 1/stderr(log v)^2 with stderr(log v) ~ stderr(v)/v; exact
// curves (all stderr zero) fall back to uniform weights. The window defaults
// to the largest contiguous n-range where every value exceeds 10x its
// stderr; pass an explicit window to override.
XiEstimate estimate_xi(const std::vector<CurvePoint>& curve, XiModel model,
                       std::optional<std::pair<int, int>> window = std::nullopt);

std::vector<CurvePoint> to_curve_points(const PairedCurve& curve);

} // namespace percolab
