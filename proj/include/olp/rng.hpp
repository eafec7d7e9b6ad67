#pragma once

#include <cstdint>

namespace olp {

// Deterministic RNG used everywhere randomness is needed. xoshiro256**
// seeded through splitmix64, with fixed draw algorithms so that runs are
// reproducible across platforms and standard-library versions (the std::
// distributions are implementation-defined and therefore unusable here).
//
// Draw order contract: one next_double() per epsilon-greedy selection,
// one next_below(n) when that selection explores. Stochastic simulation
// outcomes are pre-drawn in ascending action order. Consumers document
// any additional draws they make.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0,n). Plain modulo; the bias at 64 bits is far
    // below anything these experiments can resolve.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    // Independent substream derived from a seed and a purpose tag.
    static Rng derive(std::uint64_t seed, std::uint64_t tag) {
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1));
        return Rng(splitmix64(x));
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace olp
