#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string_view>
#include <utility>

namespace ofdmici {

/// FNV-1a hash, used to salt RNG streams with stable names instead of
/// list positions.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// splitmix64 step. Used for seeding and for deriving independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// xoshiro256++ generator (Blackman/Vigna). Hand-rolled so that every
/// result in this project is bit-reproducible across platforms and
/// standard libraries; std::* distributions are not portable.
///
/// Independent streams are obtained with derive(), which mixes a master
/// seed with a list of salt words through splitmix64. Two streams with
/// different salts never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> salt) {
        std::uint64_t s = seed;
        for (std::uint64_t w : salt) {
            s = splitmix64(s) ^ (w * 0x9e3779b97f4a7c15ull);
        }
        return Rng(s);
    }

    std::uint64_t next_u64() {
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

    /// Uniform double in [0, 1), 53 bits of randomness.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Unbiased uniform integer in [0, n). Lemire multiply-shift with rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Two independent standard normal variates via Box-Muller.
    std::pair<double, double> normal_pair() {
        // u1 in (0, 1] so the log is finite.
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

/// Salt words naming the independent stream families used across the
/// library. Keeping them in one place guarantees two subsystems never
/// collide on the same derived stream.
namespace stream {
inline constexpr std::uint64_t channel = 0x6368616e6e656cull;   // per-realization channel draw
inline constexpr std::uint64_t symbols = 0x73796d626f6c73ull;   // ICI sample symbol draws
inline constexpr std::uint64_t montecarlo = 0x6d6f6e7465ull;    // BER iteration draws
inline constexpr std::uint64_t bootstrap = 0x626f6f7473ull;     // bootstrap resampling
} // namespace stream

} // namespace ofdmici
