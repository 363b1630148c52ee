#pragma once

#include <cstdint>

namespace percolab {

// Identifies one reproducible random stream. Distinct stream_ids under the
// same seed give statistically independent draw sequences; the same
// (seed, stream_id, draw index) triple gives the identical value on every
// platform, so replicas can be evaluated in any order or partition.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Stafford mix 13).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

// Counter-based generator: draw(i) = mix64(key + (i+1)*golden), i.e. a
// random-access SplitMix64 sequence keyed by (seed, stream_id). No state
// advances; any draw can be produced directly from its index.
class CounterRng {
public:
    explicit CounterRng(RngStream s)
        : key_(detail::mix64(s.seed + detail::kGolden) ^
               detail::mix64(s.stream_id * detail::kGolden + 0x52DCE729ull)) {}

    std::uint64_t bits(std::uint64_t draw_index) const {
        return detail::mix64(key_ + (draw_index + 1) * detail::kGolden);
    }

    // Uniform double in [0,1) from the top 53 bits.
    double uniform(std::uint64_t draw_index) const {
        return static_cast<double>(bits(draw_index) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

// Threshold on 53-bit draws such that (bits >> 11) < threshold happens with
// probability round(p * 2^53) / 2^53. p = 0 never fires, p = 1 always does.
inline std::uint64_t bernoulli_threshold(double p) {
    long double t = static_cast<long double>(p) * 0x1.0p53L;
    if (t <= 0.0L) return 0;
    if (t >= 0x1.0p53L) return 1ull << 53;
    return static_cast<std::uint64_t>(t + 0.5L);
}

} // namespace percolab
