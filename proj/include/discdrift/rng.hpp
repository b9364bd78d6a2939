#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <boost/random/normal_distribution.hpp>

namespace discdrift {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ engine. Satisfies UniformRandomBitGenerator.
///
/// Streams are keyed by up to three 64-bit words (seed, replication, substream)
/// that are folded through splitmix64, so any replication can be regenerated
/// on its own without replaying the others.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0,
                          std::uint64_t substream = 0) noexcept {
        std::uint64_t mix = seed;
        std::uint64_t key = splitmix64(mix);
        mix = key ^ (stream * 0xD1B54A32D192ED03ULL);
        key = splitmix64(mix);
        mix = key ^ (substream * 0x8CB92BA72F3D8DD7ULL);
        for (auto& word : state_) word = splitmix64(mix);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Standard normal variates by the ziggurat method (Boost implementation,
/// which is table-driven and stateless, so results depend only on the engine).
class StandardNormal {
public:
    template <class Engine>
    double operator()(Engine& engine) {
        return dist_(engine);
    }

private:
    boost::random::normal_distribution<double> dist_{0.0, 1.0};
};

} // namespace discdrift
