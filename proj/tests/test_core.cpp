#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "percolab/core.hpp"

using namespace percolab;

namespace {

// Unit square [0,1]^2: vertices a=(0,0) c=(1,1) etc.; bond order is
// ab=(0,0)-(1,0), ad=(0,0)-(0,1), dc=(0,1)-(1,1), bc=(1,0)-(1,1).
struct Square {
    LatticeGraph g = LatticeGraph::box({0, 0}, {1, 1});
    Vertex a = g.vertex_at({0, 0});
    Vertex b = g.vertex_at({1, 0});
    Vertex c = g.vertex_at({1, 1});
    Vertex d = g.vertex_at({0, 1});
    Bond ab = 0, ad = 1, dc = 2, bc = 3;
};

} // namespace

TEST_CASE("sample_config endpoints and law") {
    LatticeGraph g = build_box({2, 4, 3});
    BondConfig closed = sample_config(g, 0.0, {7, 0});
    CHECK(closed.open_count() == 0);
    BondConfig open = sample_config(g, 1.0, {7, 0});
    CHECK(open.open_count() == g.bond_count());

    LatticeGraph big = build_box({2, 8, 80}); // ~10^5 bonds
    REQUIRE(big.bond_count() > 50000);
    BondConfig half = sample_config(big, 0.5, {42, 3});
    double m = static_cast<double>(big.bond_count());
    double frac = static_cast<double>(half.open_count()) / m;
    double sigma = std::sqrt(0.25 / m);
    CHECK(std::abs(frac - 0.5) < 5 * sigma);

    CHECK_THROWS_AS(sample_config(g, -0.1, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_config(g, 1.5, {1, 0}), std::invalid_argument);
}

TEST_CASE("sampling is deterministic per (seed, stream)") {
    LatticeGraph g = build_box({2, 3, 2});
    CHECK(sample_config(g, 0.37, {11, 5}) == sample_config(g, 0.37, {11, 5}));
    CHECK_FALSE(sample_config(g, 0.37, {11, 5}) == sample_config(g, 0.37, {11, 6}));
    CHECK_FALSE(sample_config(g, 0.37, {11, 5}) == sample_config(g, 0.37, {12, 5}));
}

TEST_CASE("connected on the unit square") {
    Square s;
    BondConfig all_open(s.g.bond_count(), true);
    BondConfig all_closed(s.g.bond_count());
    CHECK(connected(s.g, all_open, s.a, s.c));
    CHECK_FALSE(connected(s.g, all_closed, s.a, s.b));
    CHECK(connected(s.g, all_closed, s.a, s.a));

    BondConfig path(s.g.bond_count());
    path.set_open(s.bc, true);
    path.set_open(s.dc, true);
    path.set_open(s.ad, true);
    CHECK(connected(s.g, path, s.a, s.b)); // a-d-c-b, ab itself closed
    CHECK(connected_bfs(s.g, path, s.a, s.b));
}

TEST_CASE("cluster") {
    Square s;
    BondConfig all_closed(s.g.bond_count());
    CHECK(cluster(s.g, all_closed, s.a) == std::vector<Vertex>{s.a});
    BondConfig all_open(s.g.bond_count(), true);
    CHECK(cluster(s.g, all_open, s.a).size() == 4);
    BondConfig one(s.g.bond_count());
    one.set_open(s.ab, true);
    std::vector<Vertex> expect{s.a, s.b};
    std::sort(expect.begin(), expect.end());
    CHECK(cluster(s.g, one, s.a) == expect);
    CHECK_THROWS_AS(cluster(s.g, one, 99), std::out_of_range);
}

TEST_CASE("truncated event") {
    LatticeGraph g = build_box({2, 1, 2}); // [-2,3] x [-2,2]
    auto [origin, e1] = axis_pair(g, 1);
    BondConfig closed(g.bond_count());
    CHECK(truncated_event(g, closed, origin, origin));
    CHECK_FALSE(truncated_event(g, closed, origin, e1));

    // opening exactly the origin-(1,0) bond keeps the cluster interior
    BondConfig one(g.bond_count());
    for (Bond b = 0; b < g.bond_count(); ++b) {
        auto [u, v] = g.bond_endpoints(b);
        if ((u == origin && v == e1) || (u == e1 && v == origin)) one.set_open(b, true);
    }
    REQUIRE(one.open_count() == 1);
    CHECK(truncated_event(g, one, origin, e1));

    BondConfig all_open(g.bond_count(), true);
    CHECK_FALSE(truncated_event(g, all_open, origin, e1)); // touches boundary
}

TEST_CASE("monotonicity under bond addition and truncated implies connected") {
    LatticeGraph g = build_box({2, 2, 2});
    auto [origin, target] = axis_pair(g, 2);
    for (std::uint64_t s = 0; s < 400; ++s) {
        // thresholding the same draws at p1 < p2 nests the configurations
        BondConfig small = sample_config(g, 0.25, {909, s});
        BondConfig large = sample_config(g, 0.55, {909, s});
        bool nested = true;
        for (Bond b = 0; b < g.bond_count(); ++b)
            nested &= !small.open(b) || large.open(b);
        REQUIRE(nested);
        CHECK(static_cast<int>(connected(g, small, origin, target)) <=
              static_cast<int>(connected(g, large, origin, target)));
        if (truncated_event(g, small, origin, target))
            CHECK(connected(g, small, origin, target));
    }
}

TEST_CASE("disjoint-set and breadth-first search agree on random triples") {
    LatticeGraph boxes[] = {build_box({2, 2, 1}), build_box({3, 1, 1}),
                            build_box({1, 6, 0})};
    CounterRng pick({555, 0});
    std::uint64_t ctr = 0;
    int checked = 0;
    while (checked < 10000) {
        const LatticeGraph& g = boxes[pick.bits(ctr++) % 3];
        double p = pick.uniform(ctr++);
        BondConfig c = sample_config(g, p, {556, pick.bits(ctr++)});
        Vertex u = static_cast<Vertex>(pick.bits(ctr++) % g.vertex_count());
        Vertex v = static_cast<Vertex>(pick.bits(ctr++) % g.vertex_count());
        REQUIRE(connected(g, c, u, v) == connected_bfs(g, c, u, v));
        ++checked;
    }
}

TEST_CASE("invalid vertices are rejected") {
    Square s;
    BondConfig c(s.g.bond_count());
    CHECK_THROWS_AS(connected(s.g, c, 0, 1000), std::out_of_range);
    CHECK_THROWS_AS(truncated_event(s.g, c, 1000, 0), std::out_of_range);
}
