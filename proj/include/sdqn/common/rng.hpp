#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace sdqn {

// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
// std:: distributions so trials replay bit-identically across platforms.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<std::uint64_t>::max();
    }

  private:
    std::uint64_t state_;
};

// Stateless mix of several words into one, for counter-based streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c = 0) {
    SplitMix64 g(a ^ 0x6a09e667f3bcc909ULL);
    std::uint64_t x = g();
    g = SplitMix64(x ^ b);
    x = g();
    g = SplitMix64(x ^ c);
    return g();
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(SplitMix64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased index in [0, n) by rejection.
inline std::size_t uniform_index(SplitMix64& rng, std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return static_cast<std::size_t>(x % bound);
}

// Standard normal draw addressed by (seed, stream, counter). Box-Muller on
// two splitmix outputs; the same triple always yields the same value.
inline double standard_normal(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
    SplitMix64 g(mix_seed(seed, stream, counter));
    const double u1 = 1.0 - uniform_unit(g);  // (0, 1]
    const double u2 = uniform_unit(g);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sdqn
