#include <doctest.h>

#include <stdexcept>

#include <set>

#include "percolab/lattice.hpp"

using namespace percolab;

namespace {

// Bond count of a box with vertex side lengths L_a.
std::int64_t bond_count_formula(const std::vector<int>& lens) {
    std::int64_t total = 0;
    for (std::size_t a = 0; a < lens.size(); ++a) {
        std::int64_t prod = lens[a] - 1;
        for (std::size_t b = 0; b < lens.size(); ++b)
            if (b != a) prod *= lens[b];
        total += prod;
    }
    return total;
}

} // namespace

TEST_CASE("build_box basic shapes") {
    LatticeGraph path = build_box({1, 2, 0});
    CHECK(path.vertex_count() == 3);
    CHECK(path.bond_count() == 2);

    LatticeGraph strip = build_box({2, 1, 0});
    CHECK(strip.vertex_count() == 2);
    CHECK(strip.bond_count() == 1);

    LatticeGraph padded = build_box({2, 1, 1});
    CHECK(padded.vertex_count() == 12);
    CHECK(padded.bond_count() == 17);
}

TEST_CASE("bond count matches the side-length formula") {
    for (const BoxSpec spec : {BoxSpec{1, 5, 2}, BoxSpec{2, 3, 2}, BoxSpec{3, 2, 1},
                               BoxSpec{4, 1, 1}, BoxSpec{2, 0, 4}}) {
        LatticeGraph g = build_box(spec);
        std::vector<int> lens;
        for (int a = 0; a < g.dim(); ++a) lens.push_back(g.hi()[a] - g.lo()[a] + 1);
        CHECK(static_cast<std::int64_t>(g.bond_count()) == bond_count_formula(lens));
        // every bond joins L1-distance-1 vertices
        for (Bond b = 0; b < g.bond_count(); ++b) {
            auto [u, v] = g.bond_endpoints(b);
            auto cu = g.coords(u), cv = g.coords(v);
            int dist = 0;
            for (int a = 0; a < g.dim(); ++a) dist += std::abs(cu[a] - cv[a]);
            REQUIRE(dist == 1);
        }
    }
}

TEST_CASE("indexing is deterministic") {
    BoxSpec spec{3, 2, 1};
    LatticeGraph a = build_box(spec);
    LatticeGraph b = build_box(spec);
    REQUIRE(a.vertex_count() == b.vertex_count());
    REQUIRE(a.bond_count() == b.bond_count());
    for (Vertex v = 0; v < a.vertex_count(); ++v) CHECK(a.coords(v) == b.coords(v));
    for (Bond e = 0; e < a.bond_count(); ++e)
        CHECK(a.bond_endpoints(e) == b.bond_endpoints(e));
}

TEST_CASE("vertex degrees lie between d and 2d, interior exactly 2d") {
    LatticeGraph g = build_box({3, 2, 2});
    const int d = g.dim();
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        int deg = g.degree(v);
        CHECK(deg >= d);
        CHECK(deg <= 2 * d);
        if (!g.is_boundary(v)) CHECK(deg == 2 * d);
    }
}

TEST_CASE("axis_pair") {
    LatticeGraph path = build_box({1, 2, 0});
    auto [o, o2] = axis_pair(path, 0);
    CHECK(o == o2);
    auto [u, v] = axis_pair(path, 2);
    CHECK(path.coords(u) == std::vector<int>{0});
    CHECK(path.coords(v) == std::vector<int>{2});

    LatticeGraph g = build_box({2, 2, 1});
    CHECK_THROWS_AS(axis_pair(g, 4), std::out_of_range); // n_max + margin + 1
    CHECK_NOTHROW(axis_pair(g, 3));
    CHECK_NOTHROW(axis_pair(g, -1));
}

TEST_CASE("boundary vertices") {
    LatticeGraph path = build_box({1, 2, 0});
    CHECK(boundary_vertices(path) == std::vector<Vertex>{0, 2});

    LatticeGraph square = LatticeGraph::box({0, 0}, {1, 1});
    CHECK(boundary_vertices(square).size() == 4);

    LatticeGraph big = LatticeGraph::box({-2, -2}, {2, 2});
    CHECK(big.vertex_count() == 25);
    const auto& bd = boundary_vertices(big);
    CHECK(bd.size() == 16);
    for (Vertex v : bd) {
        auto c = big.coords(v);
        CHECK(std::max(std::abs(c[0]), std::abs(c[1])) == 2);
    }
    std::set<Vertex> uniq(bd.begin(), bd.end());
    CHECK(uniq.size() == bd.size());
}

TEST_CASE("build_box rejections") {
    CHECK_THROWS_AS(build_box({0, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(build_box({2, -1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(build_box({2, 1, -1}), std::invalid_argument);
    // bond count would overflow the 32-bit index type
    CHECK_THROWS_AS(build_box({2, 100000, 100000}), std::invalid_argument);
}
