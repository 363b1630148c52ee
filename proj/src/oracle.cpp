#include "percolab/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace percolab {

std::string to_string(EventKind k) {
    return k == EventKind::two_point ? "two_point" : "truncated";
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "two_point") return EventKind::two_point;
    if (s == "truncated") return EventKind::truncated;
    throw std::invalid_argument("unknown event kind: " + s);
}

ConnectivityPolynomial connectivity_counts(const LatticeGraph& g, const Event& ev,
                                           std::uint32_t cap_bits) {
    const std::uint32_t m = g.bond_count();
    if (m > cap_bits)
        throw std::invalid_argument(
            "connectivity_counts: " + std::to_string(m) + " bonds exceeds the 2^" +
            std::to_string(cap_bits) + " enumeration cap");
    if (ev.u >= g.vertex_count() || ev.v >= g.vertex_count())
        throw std::out_of_range("connectivity_counts: invalid event vertex");

    ConnectivityPolynomial poly;
    poly.m = m;
    poly.counts.assign(m + 1, 0);
    poly.event = to_string(ev.kind);

    const auto& bndry = g.boundary();
    DisjointSet dsu(g.vertex_count());
    const std::uint64_t total = 1ull << m;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        dsu.reset();
        for (std::uint32_t b = 0; b < m; ++b) {
            if (!(mask >> b & 1)) continue;
            auto [x, y] = g.bond_endpoints(b);
            dsu.unite(x, y);
        }
        Vertex ru = dsu.find(ev.u);
        bool holds = (ru == dsu.find(ev.v));
        if (holds && ev.kind == EventKind::truncated) {
            for (Vertex w : bndry) {
                if (dsu.find(w) == ru) {
                    holds = false;
                    break;
                }
            }
        }
        if (holds) ++poly.counts[std::popcount(mask)];
    }
    return poly;
}

double eval_polynomial(const ConnectivityPolynomial& poly, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("p must lie in [0,1]");
    const std::uint32_t m = poly.m;
    if (poly.counts.size() != m + 1)
        throw std::invalid_argument("polynomial counts length != M+1");
    if (p == 0.0) return poly.counts[0] ? 1.0 : 0.0;
    if (p == 1.0) return poly.counts[m] ? 1.0 : 0.0;
    double value = 0.0;
    for (std::uint32_t k = 0; k <= m; ++k) {
        if (!poly.counts[k]) continue;
        double log_term = std::log(static_cast<double>(poly.counts[k])) +
                          k * std::log(p) + (m - k) * std::log1p(-p);
        value += std::exp(log_term);
    }
    return std::min(value, 1.0);
}

double ExactValue::to_double() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

ExactValue eval_polynomial_exact(const ConnectivityPolynomial& poly,
                                 std::uint32_t num, std::uint32_t den) {
    if (den == 0 || num > den)
        throw std::invalid_argument("exact evaluation needs 0 <= num/den <= 1");
    using u128 = unsigned __int128;
    const std::uint32_t m = poly.m;
    // den^M must fit; M <= 24 with den <= ~40 keeps everything inside 128 bits.
    u128 dp = 1;
    for (std::uint32_t k = 0; k < m; ++k) dp *= den;
    u128 numer = 0;
    for (std::uint32_t k = 0; k <= m; ++k) {
        if (!poly.counts[k]) continue;
        u128 term = poly.counts[k];
        for (std::uint32_t i = 0; i < k; ++i) term *= num;
        for (std::uint32_t i = 0; i < m - k; ++i) term *= (den - num);
        numer += term;
    }
    return {numer, dp};
}

std::vector<std::pair<int, double>> exact_curve(const BoxSpec& spec, double p,
                                                const std::vector<int>& n_list,
                                                EventKind kind,
                                                std::uint32_t cap_bits) {
    LatticeGraph g = build_box(spec);
    std::vector<std::pair<int, double>> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        auto [u, v] = axis_pair(g, n);
        ConnectivityPolynomial poly = connectivity_counts(g, {kind, u, v}, cap_bits);
        out.emplace_back(n, eval_polynomial(poly, p));
    }
    return out;
}

} // namespace percolab
