#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace graphonlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
//
// Every variate is a pure function of (seed, stream, counter words), so
// simulation noise indexed by (replica, particle, step) is reproducible
// bit-for-bit independently of execution order or thread count, and the
// particle system and its projection can share Brownian increments by
// sharing indices.
namespace philox {

inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

inline double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
    // 53-bit uniform in (0, 1); never returns 0, safe under log().
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace philox

/// A named substream of the generator. Distinct stream ids give independent
/// streams for the same seed (noise, initial sampling, matrix sampling, ...).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint32_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32) ^ stream} {}

    /// Two uniforms in (0,1) at counter (c0, c1, c2, slot).
    std::array<double, 2> uniform_pair(std::uint32_t c0, std::uint32_t c1,
                                       std::uint32_t c2, std::uint32_t slot) const {
        const auto w = philox::block({c0, c1, c2, slot}, key_);
        return {philox::to_unit_open(w[0], w[1]), philox::to_unit_open(w[2], w[3])};
    }

    /// Two independent standard normals (Box-Muller) at the given counter.
    std::array<double, 2> normal_pair(std::uint32_t c0, std::uint32_t c1,
                                      std::uint32_t c2, std::uint32_t slot) const {
        const auto u = uniform_pair(c0, c1, c2, slot);
        const double radius = std::sqrt(-2.0 * std::log(u[0]));
        const double angle = 6.283185307179586476925286766559 * u[1];
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    double uniform(std::uint32_t c0, std::uint32_t c1 = 0, std::uint32_t c2 = 0,
                   std::uint32_t slot = 0) const {
        return uniform_pair(c0, c1, c2, slot)[0];
    }

    double normal(std::uint32_t c0, std::uint32_t c1 = 0, std::uint32_t c2 = 0,
                  std::uint32_t slot = 0) const {
        return normal_pair(c0, c1, c2, slot)[0];
    }

private:
    std::array<std::uint32_t, 2> key_;
};

// Stream ids used across the library; kept in one place so substreams never collide.
namespace streams {
inline constexpr std::uint32_t kSimulationNoise = 1;
inline constexpr std::uint32_t kInitialSampling = 2;
inline constexpr std::uint32_t kBernoulliMatrix = 3;
inline constexpr std::uint32_t kCutNormSearch = 4;
inline constexpr std::uint32_t kPropertySweep = 5;
}  // namespace streams

}  // namespace graphonlab
