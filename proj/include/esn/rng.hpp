#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace esn {

/// SplitMix64 step; used to expand seeds and derive sub-streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** seeded through SplitMix64. The only randomness source in the
/// project; the algorithm is fixed by its reference implementation, so a seed
/// produces the same stream on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Unbiased integer on [0, bound); bound must be nonzero.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t reject_below = (-bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= reject_below) return r % bound;
        }
    }

    /// Standard normal via Box-Muller; consumes two stream values.
    double normal() {
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// FNV-1a over (master_seed, series_id, config_index). Every task in a sweep
/// gets its own stream regardless of scheduling order.
inline std::uint64_t task_seed(std::uint64_t master_seed, const std::string& series_id,
                               std::uint64_t config_index) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 0x100000001B3ULL;
    };
    for (int i = 0; i < 8; ++i) mix((master_seed >> (8 * i)) & 0xFFU);
    for (const unsigned char c : series_id) mix(c);
    for (int i = 0; i < 8; ++i) mix((config_index >> (8 * i)) & 0xFFU);
    return h;
}

/// Derives the seed of the `stream`-th sub-stream of `base`.
inline std::uint64_t sub_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0xA0761D6478BD642FULL * (stream + 1));
    return splitmix64(s);
}

}  // namespace esn
