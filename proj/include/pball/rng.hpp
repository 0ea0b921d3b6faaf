// Reproducible random streams: xoshiro256++ seeded through SplitMix64.
//
// Streams are cheap value types owned by the caller.  Parallel code derives
// one stream per work chunk with RandomStream::derive(seed, stage, chunk);
// the derivation is part of the output-reproducibility contract, so results
// are bit-identical for a given (seed, stage, chunk) partition no matter how
// chunks are scheduled across threads.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pball {

namespace detail {

// SplitMix64 step (Vigna's fixed-increment variant of Java's SplittableRandom).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
        // all-zero state is the one forbidden xoshiro seed
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    // Stream for work chunk `chunk` of stage `stage` under global seed `seed`.
    // stage/chunk are folded through two SplitMix64 rounds each, so nearby
    // indices land on unrelated points of the seed space.
    static RandomStream derive(std::uint64_t seed, std::uint64_t stage, std::uint64_t chunk) {
        std::uint64_t s = seed;
        std::uint64_t h = detail::splitmix64(s);
        std::uint64_t t = stage + 0xD1B54A32D192ED03ULL;
        h ^= detail::splitmix64(t);
        std::uint64_t c = chunk + 0x8CB92BA72F3D8DD7ULL;
        h ^= detail::splitmix64(c);
        return RandomStream(h);
    }

    // xoshiro256++
    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    // uniform on the open interval (0,1); never returns an endpoint
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool coin() { return (next_u64() >> 63) != 0; }

    // uniform integer in [0, bound) by 128-bit multiply-shift
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // standard normal via the Marsaglia polar method (the spare is discarded)
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    double exponential() { return -std::log(uniform()); }

    // Gamma(shape, rate=1) via Marsaglia-Tsang squeeze; shapes below 1 are
    // boosted to shape+1 and scaled back by U^(1/shape).
    double gamma(double shape) {
        if (shape < 1.0) {
            const double boosted = gamma(shape + 1.0);
            return boosted * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace pball
