#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace percolab {

using Vertex = std::uint32_t;
using Bond = std::uint32_t;

// Finite box of the hypercubic lattice holding the segment from the origin
// to (n_max, 0, ..., 0), padded by `margin` sites on every side:
// [-margin, n_max+margin] x [-margin, margin]^(d-1).
struct BoxSpec {
    int d = 2;
    int n_max = 1;
    int margin = 0;

    // d = 1 boxes are admitted as analytic test fixtures only (tau = p^n on a
    // path); reports must flag them.
    bool fixture_dimension() const { return d == 1; }
};

// Axis-aligned box of Z^d with its nearest-neighbor bonds. Vertices are
// indexed lexicographically by coordinate tuple (first axis most
// significant), bonds by (lower endpoint, axis). Immutable after build.
class LatticeGraph {
public:
    static LatticeGraph build(const BoxSpec& spec);
    static LatticeGraph box(std::vector<int> lo, std::vector<int> hi);

    int dim() const { return static_cast<int>(lo_.size()); }
    std::uint32_t vertex_count() const { return vertex_count_; }
    std::uint32_t bond_count() const { return bond_count_; }
    const std::vector<int>& lo() const { return lo_; }
    const std::vector<int>& hi() const { return hi_; }

    std::vector<int> coords(Vertex v) const;
    // Vertex index of a coordinate tuple; throws if outside the box.
    Vertex vertex_at(const std::vector<int>& c) const;
    bool contains(const std::vector<int>& c) const;

    std::pair<Vertex, Vertex> bond_endpoints(Bond b) const {
        return {bond_u_[b], bond_v_[b]};
    }

    // CSR adjacency: for vertex v, incident (neighbor, bond) pairs are
    // adj_vertex/adj_bond[adj_offset[v] .. adj_offset[v+1]).
    const std::vector<std::uint32_t>& adj_offset() const { return adj_offset_; }
    const std::vector<Vertex>& adj_vertex() const { return adj_vertex_; }
    const std::vector<Bond>& adj_bond() const { return adj_bond_; }

    int degree(Vertex v) const {
        return static_cast<int>(adj_offset_[v + 1] - adj_offset_[v]);
    }

    // Vertices with at least one Z^d neighbor outside the box, ascending.
    const std::vector<Vertex>& boundary() const { return boundary_; }
    bool is_boundary(Vertex v) const { return is_boundary_[v] != 0; }
    const std::vector<std::uint8_t>& boundary_mask() const { return is_boundary_; }

private:
    LatticeGraph() = default;

    std::vector<int> lo_, hi_;
    std::vector<std::int64_t> stride_;
    std::uint32_t vertex_count_ = 0;
    std::uint32_t bond_count_ = 0;
    std::vector<Vertex> bond_u_, bond_v_;
    std::vector<std::uint32_t> adj_offset_;
    std::vector<Vertex> adj_vertex_;
    std::vector<Bond> adj_bond_;
    std::vector<Vertex> boundary_;
    std::vector<std::uint8_t> is_boundary_;
};

// Spec-level operations.
LatticeGraph build_box(const BoxSpec& spec);

// Vertex indices of (0,...,0) and (n,0,...,0); throws if either is outside.
std::pair<Vertex, Vertex> axis_pair(const LatticeGraph& g, int n);

const std::vector<Vertex>& boundary_vertices(const LatticeGraph& g);

} // namespace percolab
