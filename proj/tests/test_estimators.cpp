#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "percolab/core.hpp"
#include "percolab/estimators.hpp"

using namespace percolab;

TEST_CASE("estimate_curve endpoints") {
    BoxSpec spec{2, 3, 1};
    CurveParams params;
    params.ns = {1, 2, 3};
    params.samples = 500;
    params.seed = 4;

    params.p = 1.0;
    PairedCurve full = estimate_curve(spec, params);
    for (const Estimate& e : full.entries) CHECK(e.mean == 1.0);
    for (const PairDiff& d : full.diffs) {
        CHECK(d.mean_diff == 0.0);
        CHECK(d.stderr_ == 0.0);
    }

    params.p = 0.0;
    PairedCurve empty = estimate_curve(spec, params);
    for (const Estimate& e : empty.entries) CHECK(e.mean == 0.0);

    params.p = 1.5;
    CHECK_THROWS_AS(estimate_curve(spec, params), std::invalid_argument);
    params.p = 0.5;
    params.ns = {99};
    CHECK_THROWS_AS(estimate_curve(spec, params), std::out_of_range);
}

TEST_CASE("estimate agrees with the oracle on the unit square") {
    LatticeGraph g = LatticeGraph::box({0, 0}, {1, 1});
    CurveParams params;
    params.p = 0.5;
    params.ns = {1};
    params.samples = 200000;
    params.seed = 20240601;
    params.workers = 2;
    PairedCurve curve = estimate_curve(g, params);
    const Estimate& e = curve.entries[0];
    CHECK(std::abs(e.mean - 0.5625) < 5 * e.stderr_); // oracle: p + p^3 - p^4 at 1/2
}

TEST_CASE("results are independent of the worker count") {
    BoxSpec spec{2, 4, 2};
    CurveParams params;
    params.p = 0.3;
    params.ns = {1, 2, 3, 4};
    params.samples = 40000;
    params.seed = 99;

    params.workers = 1;
    PairedCurve a = estimate_curve(spec, params);
    params.workers = 8;
    PairedCurve b = estimate_curve(spec, params);

    REQUIRE(a.ns == b.ns);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].successes == b.entries[i].successes);
        CHECK(a.entries[i].mean == b.entries[i].mean);
        CHECK(a.entries[i].stderr_ == b.entries[i].stderr_);
        CHECK(a.entries[i].ci_low == b.entries[i].ci_low);
        CHECK(a.entries[i].ci_high == b.entries[i].ci_high);
    }
    for (std::size_t i = 0; i < a.diffs.size(); ++i) {
        CHECK(a.diffs[i].n_plus == b.diffs[i].n_plus);
        CHECK(a.diffs[i].n_minus == b.diffs[i].n_minus);
        CHECK(a.diffs[i].n_both == b.diffs[i].n_both);
        CHECK(a.diffs[i].mean_diff == b.diffs[i].mean_diff);
        CHECK(a.diffs[i].stderr_ == b.diffs[i].stderr_);
    }
}

TEST_CASE("paired diffs satisfy the same-sample accounting identity") {
    BoxSpec spec{2, 3, 2};
    CurveParams params;
    params.p = 0.35;
    params.ns = {1, 2, 3};
    params.samples = 30000;
    params.seed = 7;
    params.workers = 2;
    PairedCurve curve = estimate_curve(spec, params);
    REQUIRE(curve.diffs.size() == 2);
    for (std::size_t i = 0; i < curve.diffs.size(); ++i) {
        double lhs = curve.diffs[i].mean_diff;
        double rhs = curve.entries[i].mean - curve.entries[i + 1].mean;
        CHECK(lhs == rhs); // exact: both are the same integer over samples
    }
}

TEST_CASE("lazy cluster growth equals explicit configuration sampling") {
    LatticeGraph g = build_box({2, 2, 1});
    const std::uint64_t seed = 31337;
    const std::uint64_t samples = 400;
    for (EventKind kind : {EventKind::two_point, EventKind::truncated}) {
        CurveParams params;
        params.p = 0.45;
        params.ns = {1, 2};
        params.kind = kind;
        params.samples = samples;
        params.seed = seed;
        PairedCurve curve = estimate_curve(g, params);

        std::uint64_t hits[2] = {0, 0};
        for (std::uint64_t s = 0; s < samples; ++s) {
            BondConfig c = sample_config(g, 0.45, {seed, s});
            for (int i = 0; i < 2; ++i) {
                auto [u, v] = axis_pair(g, params.ns[i]);
                bool hold = kind == EventKind::two_point ? connected(g, c, u, v)
                                                         : truncated_event(g, c, u, v);
                hits[i] += hold;
            }
        }
        CHECK(curve.entries[0].successes == hits[0]);
        CHECK(curve.entries[1].successes == hits[1]);
    }
}

TEST_CASE("sweep on a path gives p^M with zero variance") {
    BoxSpec spec{1, 4, 0};
    SweepFamily fam = sweep_estimate(spec, {4}, {0.2, 0.5, 0.9}, 200, 5);
    for (std::size_t pi = 0; pi < fam.p_grid.size(); ++pi) {
        double expect = std::pow(fam.p_grid[pi], 4.0);
        CHECK(fam.curves[pi][0].mean == doctest::Approx(expect).epsilon(1e-12));
        CHECK(fam.curves[pi][0].stderr_ == 0.0);
    }
}

TEST_CASE("sweep endpoints and refusal") {
    BoxSpec spec{2, 1, 1};
    SweepFamily fam = sweep_estimate(spec, {0, 1}, {0.0, 1.0}, 50, 5);
    CHECK(fam.curves[0][0].mean == 1.0); // n=0 at p=0
    CHECK(fam.curves[0][1].mean == 0.0); // n=1 at p=0 (a_0 = 0)
    CHECK(fam.curves[1][1].mean == 1.0); // n=1 at p=1

    CHECK_THROWS_AS(
        sweep_estimate(spec, {1}, {0.5}, 50, 5, EventKind::truncated),
        std::invalid_argument);
}

TEST_CASE("sweep matches the oracle polynomial on the unit square") {
    LatticeGraph g = LatticeGraph::box({0, 0}, {1, 1});
    const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
    SweepFamily fam = sweep_estimate(g, {1}, grid, 40000, 12);
    for (std::size_t pi = 0; pi < grid.size(); ++pi) {
        double p = grid[pi];
        double exact = p + p * p * p - p * p * p * p;
        const SweepCurvePoint& pt = fam.curves[pi][0];
        CHECK(std::abs(pt.mean - exact) < 5 * pt.stderr_);
    }
}

TEST_CASE("sweep and direct estimates agree within combined uncertainty") {
    BoxSpec spec{2, 2, 1};
    const double p = 0.4;
    SweepFamily fam = sweep_estimate(spec, {1, 2}, {p}, 30000, 21);
    CurveParams params;
    params.p = p;
    params.ns = {1, 2};
    params.samples = 200000;
    params.seed = 22;
    params.workers = 2;
    PairedCurve direct = estimate_curve(spec, params);
    for (int i = 0; i < 2; ++i) {
        double se = std::hypot(fam.curves[0][i].stderr_, direct.entries[i].stderr_);
        CHECK(std::abs(fam.curves[0][i].mean - direct.entries[i].mean) < 5 * se);
    }
}

TEST_CASE("xi regression recovers synthetic curves") {
    std::vector<CurvePoint> pure;
    for (int n = 1; n <= 10; ++n) pure.push_back({n, std::exp(-n / 2.0), 0.0});
    XiEstimate xi = estimate_xi(pure, XiModel::pure_exponential());
    CHECK(xi.xi == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(xi.stderr_ == doctest::Approx(0.0).epsilon(1e-9));

    std::vector<CurvePoint> oz;
    for (int n = 1; n <= 10; ++n)
        oz.push_back({n, 2.0 * std::exp(-n / 3.0) / std::sqrt(n), 0.0});
    XiEstimate fit = estimate_xi(oz, XiModel::oz(0.5));
    CHECK(fit.xi == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.amplitude == doctest::Approx(2.0).epsilon(1e-9));

    // a pure-exponential fit of the corrected curve is biased low and leaves
    // a residual trend
    XiEstimate biased = estimate_xi(oz, XiModel::pure_exponential());
    CHECK(biased.xi < 3.0);
    double r0 = biased.residuals.front(), r9 = biased.residuals.back();
    CHECK(std::abs(r0) + std::abs(r9) > 1e-3);
}

TEST_CASE("xi regression validation") {
    std::vector<CurvePoint> two{{1, 0.5, 0.0}, {2, 0.25, 0.0}};
    CHECK_THROWS_AS(estimate_xi(two, XiModel::pure_exponential()), std::invalid_argument);

    std::vector<CurvePoint> flat;
    for (int n = 1; n <= 5; ++n) flat.push_back({n, 0.5, 0.0});
    CHECK_THROWS_AS(estimate_xi(flat, XiModel::pure_exponential()), std::domain_error);

    std::vector<CurvePoint> with_zero{{1, 0.5, 0.0}, {2, 0.0, 0.0}, {3, 0.1, 0.0},
                                      {4, 0.05, 0.0}};
    CHECK_THROWS_AS(estimate_xi(with_zero, XiModel::pure_exponential(),
                                std::pair<int, int>{1, 4}),
                    std::invalid_argument);
}

TEST_CASE("the default fit window drops noise-dominated tails") {
    std::vector<CurvePoint> curve;
    for (int n = 1; n <= 8; ++n) {
        double v = std::exp(-n / 1.5);
        curve.push_back({n, v, v / 100.0});
    }
    curve.push_back({9, 1e-7, 1e-5}); // far below the 10x-stderr rule
    XiEstimate xi = estimate_xi(curve, XiModel::pure_exponential());
    CHECK(xi.window_lo == 1);
    CHECK(xi.window_hi == 8);
    CHECK(xi.xi == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("Wilson intervals bracket the mean") {
    Estimate zero = proportion_estimate(0, 1000, 1.96);
    CHECK(zero.mean == 0.0);
    CHECK(zero.ci_low == 0.0);
    CHECK(zero.ci_high > 0.0);

    Estimate all = proportion_estimate(1000, 1000, 1.96);
    CHECK(all.ci_high == 1.0);
    CHECK(all.ci_low < 1.0);

    for (std::uint64_t k : {1ull, 17ull, 500ull, 999ull}) {
        Estimate e = proportion_estimate(k, 1000, 1.96);
        CHECK(e.ci_low <= e.mean);
        CHECK(e.mean <= e.ci_high);
        CHECK(e.stderr_ ==
              doctest::Approx(std::sqrt(e.mean * (1 - e.mean) / 1000.0)).epsilon(1e-12));
    }
}

TEST_CASE("normal quantile") {
    CHECK(normal_quantile_two_sided(0.95) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK(normal_quantile_two_sided(0.6827) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(normal_quantile_two_sided(1.0), std::invalid_argument);
}
