#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "percolab/oracle.hpp"

using namespace percolab;

namespace {

// Independently computed by exhaustive enumeration (2^17 configurations) of
// the d=2, n_max=1, margin=1 box; regression constants.
const std::vector<std::uint64_t> k17TwoPointCounts = {
    0, 1, 16, 122, 586, 1980, 4979, 9614, 14487,
    17118, 15778, 11178, 5955, 2356, 679, 136, 17, 1};
const std::vector<std::uint64_t> k17TruncatedCounts = {
    0, 1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1, 0, 0, 0, 0, 0, 0};
constexpr double k17TwoPointAt02 = 0.21359972496048128; // 162963657349/762939453125

double binom(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0));
}

} // namespace

TEST_CASE("counts on tiny paths") {
    LatticeGraph one = build_box({1, 1, 0});
    auto [u1, v1] = axis_pair(one, 1);
    ConnectivityPolynomial p1 = connectivity_counts(one, {EventKind::two_point, u1, v1});
    CHECK(p1.counts == std::vector<std::uint64_t>{0, 1});
    CHECK(eval_polynomial(p1, 0.3) == doctest::Approx(0.3).epsilon(1e-14));

    LatticeGraph two = build_box({1, 2, 0});
    auto [u2, v2] = axis_pair(two, 2);
    ConnectivityPolynomial p2 = connectivity_counts(two, {EventKind::two_point, u2, v2});
    CHECK(p2.counts == std::vector<std::uint64_t>{0, 0, 1});
    CHECK(eval_polynomial(p2, 0.4) == doctest::Approx(0.16).epsilon(1e-14));
}

TEST_CASE("unit square counts and exact evaluation") {
    LatticeGraph g = LatticeGraph::box({0, 0}, {1, 1});
    auto [a, b] = axis_pair(g, 1);
    ConnectivityPolynomial poly = connectivity_counts(g, {EventKind::two_point, a, b});
    CHECK(poly.counts == std::vector<std::uint64_t>{0, 1, 3, 4, 1});

    ExactValue half = eval_polynomial_exact(poly, 1, 2); // p + p^3 - p^4 at 1/2
    CHECK(static_cast<std::uint64_t>(half.numerator) == 9);
    CHECK(static_cast<std::uint64_t>(half.denominator) == 16);
    CHECK(eval_polynomial(poly, 0.5) == doctest::Approx(0.5625).epsilon(1e-14));

    // truncated event is impossible: every vertex of the square is boundary
    ConnectivityPolynomial trunc = connectivity_counts(g, {EventKind::truncated, a, b});
    for (std::uint64_t c : trunc.counts) CHECK(c == 0);
}

TEST_CASE("17-bond box regression against independent enumeration") {
    LatticeGraph g = build_box({2, 1, 1});
    REQUIRE(g.bond_count() == 17);
    auto [u, v] = axis_pair(g, 1);

    ConnectivityPolynomial tp = connectivity_counts(g, {EventKind::two_point, u, v});
    CHECK(tp.counts == k17TwoPointCounts);
    CHECK(eval_polynomial(tp, 0.2) == doctest::Approx(k17TwoPointAt02).epsilon(1e-12));
    ExactValue exact = eval_polynomial_exact(tp, 1, 2);
    CHECK(static_cast<std::uint64_t>(exact.numerator) == 85003);
    CHECK(static_cast<std::uint64_t>(exact.denominator) == 131072);

    ConnectivityPolynomial tr = connectivity_counts(g, {EventKind::truncated, u, v});
    CHECK(tr.counts == k17TruncatedCounts);
    // on this box the truncated value is p(1-p)^6 exactly
    for (double p : {0.2, 0.5, 0.95})
        CHECK(eval_polynomial(tr, p) ==
              doctest::Approx(p * std::pow(1 - p, 6)).epsilon(1e-12));
}

TEST_CASE("polynomial endpoint evaluation and validation") {
    ConnectivityPolynomial poly{2, {1, 0, 1}, "two_point"};
    CHECK(eval_polynomial(poly, 0.0) == 1.0);
    CHECK(eval_polynomial(poly, 1.0) == 1.0);
    ConnectivityPolynomial zero{2, {0, 0, 1}, "two_point"};
    CHECK(eval_polynomial(zero, 0.0) == 0.0);
    CHECK_THROWS_AS(eval_polynomial(poly, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(eval_polynomial(poly, -0.2), std::invalid_argument);
}

TEST_CASE("enumeration cap is an explicit refusal") {
    LatticeGraph g = build_box({2, 2, 2}); // 58 bonds
    auto [u, v] = axis_pair(g, 1);
    CHECK_THROWS_WITH_AS(connectivity_counts(g, {EventKind::two_point, u, v}),
                         doctest::Contains("enumeration cap"), std::invalid_argument);
}

TEST_CASE("exact_curve") {
    auto curve = exact_curve({1, 3, 0}, 0.5, {1, 2, 3}, EventKind::two_point);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].second == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(curve[1].second == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(curve[2].second == doctest::Approx(0.125).epsilon(1e-14));

    auto sure = exact_curve({2, 1, 1}, 1.0, {0, 1}, EventKind::two_point);
    CHECK(sure[0].second == 1.0);
    CHECK(sure[1].second == 1.0);

    auto box17 = exact_curve({2, 1, 1}, 0.2, {0, 1}, EventKind::two_point);
    CHECK(box17[0].second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(box17[1].second == doctest::Approx(k17TwoPointAt02).epsilon(1e-12));
}

TEST_CASE("polynomial invariants") {
    LatticeGraph g = build_box({2, 1, 1});
    auto [u, v] = axis_pair(g, 1);
    ConnectivityPolynomial tp = connectivity_counts(g, {EventKind::two_point, u, v});
    ConnectivityPolynomial tr = connectivity_counts(g, {EventKind::truncated, u, v});

    // 0 <= a_k <= C(M,k); increasing event has nondecreasing a_k / C(M,k)
    double prev_frac = -1.0;
    for (std::uint32_t k = 0; k <= tp.m; ++k) {
        double cmk = binom(tp.m, k);
        CHECK(static_cast<double>(tp.counts[k]) <= cmk * (1 + 1e-9));
        double frac = tp.counts[k] / cmk;
        CHECK(frac >= prev_frac - 1e-12);
        prev_frac = frac;
    }

    // value nondecreasing in p for the two_point event; truncated <= two_point
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        double p = i / 20.0;
        double val = eval_polynomial(tp, p);
        CHECK(val >= prev - 1e-12);
        CHECK(val <= 1.0 + 1e-12);
        CHECK(eval_polynomial(tr, p) <= val + 1e-12);
        prev = val;
    }
}

TEST_CASE("two-point value is monotone in the margin (subgraph coupling)") {
    for (double p : {0.1, 0.3, 0.6}) {
        double prev = -1.0;
        for (int margin = 0; margin <= 1; ++margin) {
            auto curve = exact_curve({2, 1, margin}, p, {1}, EventKind::two_point);
            CHECK(curve[0].second >= prev - 1e-12);
            prev = curve[0].second;
        }
    }
}
