#include "percolab/lattice.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace percolab {

LatticeGraph LatticeGraph::build(const BoxSpec& spec) {
    if (spec.d < 1) throw std::invalid_argument("BoxSpec.d must be >= 1");
    if (spec.n_max < 0) throw std::invalid_argument("BoxSpec.n_max must be >= 0");
    if (spec.margin < 0) throw std::invalid_argument("BoxSpec.margin must be >= 0");
    std::vector<int> lo(spec.d, -spec.margin), hi(spec.d, spec.margin);
    hi[0] = spec.n_max + spec.margin;
    return box(std::move(lo), std::move(hi));
}

LatticeGraph LatticeGraph::box(std::vector<int> lo, std::vector<int> hi) {
    if (lo.empty() || lo.size() != hi.size())
        throw std::invalid_argument("box corners must be nonempty and of equal dimension");
    const int d = static_cast<int>(lo.size());
    for (int a = 0; a < d; ++a)
        if (lo[a] > hi[a]) throw std::invalid_argument("box corner lo exceeds hi");

    LatticeGraph g;
    g.lo_ = std::move(lo);
    g.hi_ = std::move(hi);

    // Lexicographic strides, first axis most significant.
    std::vector<std::int64_t> len(d);
    for (int a = 0; a < d; ++a) len[a] = std::int64_t{g.hi_[a]} - g.lo_[a] + 1;
    g.stride_.assign(d, 1);
    for (int a = d - 2; a >= 0; --a) {
        g.stride_[a] = g.stride_[a + 1] * len[a + 1];
        if (g.stride_[a] > std::numeric_limits<std::uint32_t>::max())
            throw std::invalid_argument("box too large: vertex index overflow");
    }
    std::int64_t nvert = g.stride_[0] * len[0];
    std::int64_t nbond = 0;
    for (int a = 0; a < d; ++a) {
        std::int64_t prod = len[a] - 1;
        for (int b = 0; b < d; ++b)
            if (b != a) prod *= len[b];
        nbond += prod;
    }
    if (nvert > std::numeric_limits<std::uint32_t>::max() ||
        nbond > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("box too large: bond index overflow");

    g.vertex_count_ = static_cast<std::uint32_t>(nvert);
    g.bond_count_ = static_cast<std::uint32_t>(nbond);
    g.bond_u_.reserve(g.bond_count_);
    g.bond_v_.reserve(g.bond_count_);

    // Bonds in (vertex, axis) order: from each vertex toward +e_a when the
    // neighbor is still inside the box.
    std::vector<int> c(d);
    for (Vertex v = 0; v < g.vertex_count_; ++v) {
        std::int64_t rem = v;
        for (int a = 0; a < d; ++a) {
            c[a] = g.lo_[a] + static_cast<int>(rem / g.stride_[a]);
            rem %= g.stride_[a];
        }
        for (int a = 0; a < d; ++a) {
            if (c[a] + 1 > g.hi_[a]) continue;
            g.bond_u_.push_back(v);
            g.bond_v_.push_back(v + static_cast<Vertex>(g.stride_[a]));
        }
    }

    // CSR adjacency over both endpoints.
    g.adj_offset_.assign(g.vertex_count_ + 1, 0);
    for (Bond b = 0; b < g.bond_count_; ++b) {
        ++g.adj_offset_[g.bond_u_[b] + 1];
        ++g.adj_offset_[g.bond_v_[b] + 1];
    }
    std::partial_sum(g.adj_offset_.begin(), g.adj_offset_.end(), g.adj_offset_.begin());
    g.adj_vertex_.resize(2 * std::size_t{g.bond_count_});
    g.adj_bond_.resize(2 * std::size_t{g.bond_count_});
    std::vector<std::uint32_t> fill(g.adj_offset_.begin(), g.adj_offset_.end() - 1);
    for (Bond b = 0; b < g.bond_count_; ++b) {
        Vertex u = g.bond_u_[b], v = g.bond_v_[b];
        g.adj_vertex_[fill[u]] = v;
        g.adj_bond_[fill[u]++] = b;
        g.adj_vertex_[fill[v]] = u;
        g.adj_bond_[fill[v]++] = b;
    }

    g.is_boundary_.assign(g.vertex_count_, 0);
    for (Vertex v = 0; v < g.vertex_count_; ++v) {
        std::int64_t rem = v;
        for (int a = 0; a < d; ++a) {
            int ca = g.lo_[a] + static_cast<int>(rem / g.stride_[a]);
            rem %= g.stride_[a];
            if (ca == g.lo_[a] || ca == g.hi_[a]) {
                g.is_boundary_[v] = 1;
                g.boundary_.push_back(v);
                break;
            }
        }
    }
    return g;
}

std::vector<int> LatticeGraph::coords(Vertex v) const {
    const int d = dim();
    std::vector<int> c(d);
    std::int64_t rem = v;
    for (int a = 0; a < d; ++a) {
        c[a] = lo_[a] + static_cast<int>(rem / stride_[a]);
        rem %= stride_[a];
    }
    return c;
}

bool LatticeGraph::contains(const std::vector<int>& c) const {
    if (c.size() != lo_.size()) return false;
    for (std::size_t a = 0; a < c.size(); ++a)
        if (c[a] < lo_[a] || c[a] > hi_[a]) return false;
    return true;
}

Vertex LatticeGraph::vertex_at(const std::vector<int>& c) const {
    if (!contains(c))
        throw std::out_of_range("coordinate outside box");
    std::int64_t idx = 0;
    for (std::size_t a = 0; a < c.size(); ++a)
        idx += (c[a] - lo_[a]) * stride_[a];
    return static_cast<Vertex>(idx);
}

LatticeGraph build_box(const BoxSpec& spec) { return LatticeGraph::build(spec); }

std::pair<Vertex, Vertex> axis_pair(const LatticeGraph& g, int n) {
    std::vector<int> origin(g.dim(), 0);
    std::vector<int> target(g.dim(), 0);
    target[0] = n;
    if (!g.contains(origin))
        throw std::out_of_range("axis_pair: origin outside box");
    if (!g.contains(target))
        throw std::out_of_range("axis_pair: n=" + std::to_string(n) + " outside box");
    return {g.vertex_at(origin), g.vertex_at(target)};
}

const std::vector<Vertex>& boundary_vertices(const LatticeGraph& g) {
    return g.boundary();
}

} // namespace percolab
