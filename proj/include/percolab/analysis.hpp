#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percolab/estimators.hpp"
#include "percolab/lattice.hpp"
#include "percolab/oracle.hpp"

namespace percolab {

// Constants entering the explicit connectivity bounds. The source results
// only assert their existence, so the values used are configuration and are
// echoed verbatim in every report.
struct BoundParams {
    double c1 = 4.0; // lower-bound exponent constant, subcritical sandwich
    double c2 = 4.0; // upper-bound constant, subcritical sandwich
    double c = 8.0;  // upper-bound constant, supercritical d >= 3 sandwich
};

// Odds ratio lambda = (1-p)/p used by the supercritical bounds.
double lambda_of(double p);

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
    bool upper_defined = true;
};

// Subcritical sandwich: p^n (1-p)^(C1 n) <= tau_p(n) <= p^n (1+C2 p)^(n/2).
BoundPair lemma2_bounds(double p, int n, const BoundParams& params);

// Supercritical truncated sandwich for d >= 3, with E = 2(d-1)(n+1)+2:
// (lambda/(1+lambda)^2)^E <= tau^f <= 2 (lambda sqrt(1+C lambda))^E.
BoundPair lemma4_bounds(double p, int n, int d, const BoundParams& params);

// Planar truncated sandwich: lambda^(2n+2) p^(2n) <= tau^f <=
// lambda^(2n+2) [ (64 lambda)^(n/2+1) / (1 - 64 lambda) + (1+12 lambda)^n ].
// The upper bound is only defined for 64 lambda < 1, i.e. p > 64/65; outside
// that domain it is reported as undefined rather than as an error.
BoundPair lemma6_bounds(double p, int n);

enum class BoundKind { lemma2, lemma4, lemma6 };
std::string to_string(BoundKind k);
BoundKind bound_kind_from_string(const std::string& s);

enum class BoundVerdict { inside, below_lower, above_upper, inconclusive };
std::string to_string(BoundVerdict v);

struct BoundPoint {
    int n = 0;
    double value = 0.0;
    double stderr_ = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool upper_defined = true;
    BoundVerdict verdict = BoundVerdict::inconclusive;
};

struct BoundReport {
    BoundKind kind = BoundKind::lemma2;
    double p = 0.0;
    int d = 0;
    BoundParams params;
    double z = 3.0;
    std::vector<BoundPoint> points;
    std::uint64_t inside = 0, below_lower = 0, above_upper = 0, inconclusive = 0;
};

// Sandwich verification of a curve (exact curves carry stderr 0) against one
// of the bound families, with a +-z*stderr tolerance band.
BoundReport check_bounds(const std::vector<CurvePoint>& curve, BoundKind kind,
                         double p, int d, const BoundParams& params, double z);

// Ornstein-Zernike fit forms. lemma1/lemma3 fix the power correction at
// nu = (d-1)/2; lemma5 (planar truncated) fixes nu = 2. All p-dependent
// prefactors are absorbed into the fitted amplitude.
enum class OzForm { lemma1, lemma3, lemma5 };
std::string to_string(OzForm f);
OzForm oz_form_from_string(const std::string& s);

struct OzFit {
    double amplitude = 0.0;
    double xi = 0.0;
    double xi_stderr = 0.0;
    double nu = 0.0;
    OzForm form = OzForm::lemma1;
    int window_lo = 0, window_hi = 0;
    std::vector<double> residuals; // log-space
    // Added-variable diagnostic for a residual 1/n trend, the order of the
    // correction the fit neglects.
    double trend_coef = 0.0;
    double trend_t = 0.0;
    bool trend_flagged = false;
};

OzFit fit_oz(const std::vector<CurvePoint>& curve, int d, OzForm form,
             std::optional<std::pair<int, int>> window = std::nullopt);

enum class MonoVerdict { decreasing_confirmed, violation_confirmed, inconclusive };
std::string to_string(MonoVerdict v);

struct MonoPoint {
    int n = 0; // verdict about tau(n) vs tau(n+1)
    double diff = 0.0;
    double stderr_ = 0.0;
    std::optional<double> zscore; // absent when stderr is exactly zero
    MonoVerdict verdict = MonoVerdict::inconclusive;
};

struct MonotonicityReport {
    double p = 0.0;
    EventKind kind = EventKind::two_point;
    double z = 3.0;
    std::uint64_t samples = 0;
    std::vector<MonoPoint> points;
    MonoVerdict overall = MonoVerdict::inconclusive;
};

// Per-n z-rule on the paired differences: decreasing confirmed at n when
// diff(n) > z*stderr(n), violation when diff(n) < -z*stderr(n). Overall is
// decreasing_confirmed iff every n confirms; any violation dominates
// inconclusive points.
MonotonicityReport check_monotone(const PairedCurve& curve, double z);

struct RatioPoint {
    int n = 0;
    double ratio = 0.0;
    double stderr_ = 0.0;
    double z_above_one = 0.0;
    double prediction = 0.0; // (1+1/n)^((d-1)/2) * exp(1/xi)
    double residual = 0.0;   // ratio - prediction
};

struct RatioReport {
    int d = 0;
    double z = 3.0;
    double xi_used = 0.0;
    std::vector<RatioPoint> points;
    bool all_above_one = false;
    bool residual_magnitude_monotone = false;
};

// Successive-ratio diagnostic r_n = mean(n)/mean(n+1) with paired-covariance
// error propagation, compared against the Ornstein-Zernike prediction.
// residual_magnitude_monotone checks |residual| non-increase across the
// window, allowing z times the propagated uncertainty per step.
RatioReport ratio_diagnostic(const PairedCurve& curve, const XiEstimate& xi, int d,
                             double z);

struct ThresholdScan {
    EventKind kind = EventKind::two_point;
    double z = 3.0;
    std::vector<double> p_grid; // ascending
    std::vector<MonotonicityReport> reports;
    std::optional<double> empirical_threshold;
};

struct ScanParams {
    EventKind kind = EventKind::two_point;
    std::vector<double> p_grid;
    int n_lo = 1, n_hi = 4;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    int workers = 1;
    double z = 3.0;
    double ci_level = 0.95;
};

// Runs estimate_curve + check_monotone on every grid point (common random
// numbers across the grid: all points reuse the same seed and stream space).
// The empirical threshold is the largest p whose lower grid tail is all
// confirmed for two_point events, or the smallest p whose upper grid tail is
// all confirmed for truncated events; grid-resolved, never interpolated.
ThresholdScan scan_monotonicity(const BoxSpec& spec, const ScanParams& params);

} // namespace percolab
