#include "percolab/core.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace percolab {

BondConfig BondConfig::from_mask(std::uint32_t bond_count, std::uint64_t mask) {
    if (bond_count > 64)
        throw std::invalid_argument("from_mask supports at most 64 bonds");
    BondConfig c(bond_count);
    if (bond_count > 0) {
        std::uint64_t keep = bond_count == 64 ? ~0ull : (1ull << bond_count) - 1;
        c.words_[0] = mask & keep;
    }
    return c;
}

std::uint64_t BondConfig::open_count() const {
    std::uint64_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

BondConfig sample_config(const LatticeGraph& g, double p, RngStream stream) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("p must lie in [0,1]");
    CounterRng rng(stream);
    const std::uint64_t thresh = bernoulli_threshold(p);
    BondConfig c(g.bond_count());
    for (Bond b = 0; b < g.bond_count(); ++b)
        if ((rng.bits(b) >> 11) < thresh) c.set_open(b, true);
    return c;
}

DisjointSet::DisjointSet(std::uint32_t n) : parent_(n), size_(n, 1) {
    for (Vertex i = 0; i < n; ++i) parent_[i] = i;
}

void DisjointSet::reset() {
    for (Vertex i = 0; i < parent_.size(); ++i) parent_[i] = i;
    std::fill(size_.begin(), size_.end(), 1u);
}

Vertex DisjointSet::find(Vertex x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]]; // path halving
        x = parent_[x];
    }
    return x;
}

void DisjointSet::unite(Vertex a, Vertex b) {
    Vertex ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
}

namespace {

void check_vertex(const LatticeGraph& g, Vertex v, const char* what) {
    if (v >= g.vertex_count())
        throw std::out_of_range(std::string(what) + ": invalid vertex index");
}

} // namespace

bool connected(const LatticeGraph& g, const BondConfig& c, Vertex u, Vertex v) {
    check_vertex(g, u, "connected");
    check_vertex(g, v, "connected");
    if (u == v) return true;
    DisjointSet dsu(g.vertex_count());
    for (Bond b = 0; b < g.bond_count(); ++b) {
        if (!c.open(b)) continue;
        auto [x, y] = g.bond_endpoints(b);
        dsu.unite(x, y);
    }
    return dsu.same(u, v);
}

bool connected_bfs(const LatticeGraph& g, const BondConfig& c, Vertex u, Vertex v) {
    check_vertex(g, u, "connected_bfs");
    check_vertex(g, v, "connected_bfs");
    if (u == v) return true;
    std::vector<std::uint8_t> seen(g.vertex_count(), 0);
    std::vector<Vertex> queue{u};
    seen[u] = 1;
    const auto& off = g.adj_offset();
    const auto& adj_v = g.adj_vertex();
    const auto& adj_b = g.adj_bond();
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex x = queue[head];
        for (std::uint32_t i = off[x]; i < off[x + 1]; ++i) {
            if (!c.open(adj_b[i])) continue;
            Vertex y = adj_v[i];
            if (seen[y]) continue;
            if (y == v) return true;
            seen[y] = 1;
            queue.push_back(y);
        }
    }
    return false;
}

std::vector<Vertex> cluster(const LatticeGraph& g, const BondConfig& c, Vertex u) {
    check_vertex(g, u, "cluster");
    std::vector<std::uint8_t> seen(g.vertex_count(), 0);
    std::vector<Vertex> queue{u};
    seen[u] = 1;
    const auto& off = g.adj_offset();
    const auto& adj_v = g.adj_vertex();
    const auto& adj_b = g.adj_bond();
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex x = queue[head];
        for (std::uint32_t i = off[x]; i < off[x + 1]; ++i) {
            if (!c.open(adj_b[i])) continue;
            Vertex y = adj_v[i];
            if (seen[y]) continue;
            seen[y] = 1;
            queue.push_back(y);
        }
    }
    std::sort(queue.begin(), queue.end());
    return queue;
}

bool truncated_event(const LatticeGraph& g, const BondConfig& c, Vertex u, Vertex v) {
    check_vertex(g, u, "truncated_event");
    check_vertex(g, v, "truncated_event");
    std::vector<Vertex> cl = cluster(g, c, u);
    bool found_v = false;
    for (Vertex x : cl) {
        if (g.is_boundary(x)) return false;
        if (x == v) found_v = true;
    }
    return found_v;
}

} // namespace percolab
