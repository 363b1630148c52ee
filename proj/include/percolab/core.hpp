#pragma once

#include <cstdint>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// One percolation configuration: an open/closed mark per bond.
class BondConfig {
public:
    explicit BondConfig(std::uint32_t bond_count, bool all_open = false)
        : size_(bond_count),
          words_((bond_count + 63) / 64, all_open ? ~0ull : 0ull) {
        if (all_open && bond_count % 64 != 0 && !words_.empty())
            words_.back() = (1ull << (bond_count % 64)) - 1;
    }

    // Oracle helper: low `bond_count` bits of `mask` (bond_count <= 64).
    static BondConfig from_mask(std::uint32_t bond_count, std::uint64_t mask);

    std::uint32_t size() const { return size_; }
    bool open(Bond b) const { return (words_[b >> 6] >> (b & 63)) & 1; }
    void set_open(Bond b, bool v) {
        std::uint64_t bit = 1ull << (b & 63);
        if (v) words_[b >> 6] |= bit; else words_[b >> 6] &= ~bit;
    }
    std::uint64_t open_count() const;

    bool operator==(const BondConfig&) const = default;

private:
    std::uint32_t size_;
    std::vector<std::uint64_t> words_;
};

// i.i.d. Bernoulli(p) marks, one counter-RNG draw per bond (draw index =
// bond index). Deterministic in (seed, stream_id, graph).
BondConfig sample_config(const LatticeGraph& g, double p, RngStream stream);

// Union-find with path halving and union by size. Worker-private.
class DisjointSet {
public:
    explicit DisjointSet(std::uint32_t n);
    void reset();
    Vertex find(Vertex x);
    void unite(Vertex a, Vertex b);
    bool same(Vertex a, Vertex b) { return find(a) == find(b); }

private:
    std::vector<Vertex> parent_;
    std::vector<std::uint32_t> size_;
};

// True iff u and v lie in the same open cluster (disjoint-set route).
bool connected(const LatticeGraph& g, const BondConfig& c, Vertex u, Vertex v);

// Independent breadth-first-search route; must agree with connected().
bool connected_bfs(const LatticeGraph& g, const BondConfig& c, Vertex u, Vertex v);

// Vertices reachable from u by open bonds, ascending; always contains u.
std::vector<Vertex> cluster(const LatticeGraph& g, const BondConfig& c, Vertex u);

// Finite-cluster proxy event: u and v connected AND the cluster of u avoids
// every boundary vertex (stands in for "u not connected to infinity").
bool truncated_event(const LatticeGraph& g, const BondConfig& c, Vertex u, Vertex v);

} // namespace percolab
