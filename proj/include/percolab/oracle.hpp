#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percolab/core.hpp"
#include "percolab/lattice.hpp"

namespace percolab {

enum class EventKind { two_point, truncated };

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct Event {
    EventKind kind = EventKind::two_point;
    Vertex u = 0;
    Vertex v = 0;
};

// Exact integer counts a_k of k-open-bond configurations realizing an event;
// the event probability is sum_k a_k p^k (1-p)^(M-k).
struct ConnectivityPolynomial {
    std::uint32_t m = 0;               // bond count
    std::vector<std::uint64_t> counts; // size m+1
    std::string event;
};

// Default enumeration cap: graphs with more than 2^24 configurations are
// refused outright rather than silently truncated.
inline constexpr std::uint32_t kDefaultEnumCapBits = 24;

// Exhaustive enumeration of all 2^M configurations; integer-exact.
ConnectivityPolynomial connectivity_counts(const LatticeGraph& g, const Event& ev,
                                           std::uint32_t cap_bits = kDefaultEnumCapBits);

// sum_k a_k p^k (1-p)^(M-k). All terms are nonnegative, so the direct sum is
// well conditioned; p = 0 and p = 1 are handled exactly.
double eval_polynomial(const ConnectivityPolynomial& poly, double p);

// Exact-rational evaluation at p = num/den for tests: returns the numerator
// of the probability over den^M.
struct ExactValue {
    unsigned __int128 numerator = 0;
    unsigned __int128 denominator = 1;
    double to_double() const;
};
ExactValue eval_polynomial_exact(const ConnectivityPolynomial& poly,
                                 std::uint32_t num, std::uint32_t den);

// Exact tau or truncated-proxy values at each n, via one enumeration per n.
std::vector<std::pair<int, double>> exact_curve(const BoxSpec& spec, double p,
                                                const std::vector<int>& n_list,
                                                EventKind kind,
                                                std::uint32_t cap_bits = kDefaultEnumCapBits);

} // namespace percolab
