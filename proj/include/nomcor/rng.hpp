#pragma once

#include <cmath>
#include <cstdint>

namespace nomcor {

// Splittable counter-style generator: every stream is a SplitMix64 sequence
// whose starting state is derived by hashing (seed, stream ids). Streams for
// different (row, replication) pairs are independent and can be consumed in
// any order, which keeps parallel studies deterministic.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(mix(seed) + GOLDEN)) {}

    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t s = mix(seed + GOLDEN);
        s = mix(s ^ mix(a + 2 * GOLDEN));
        s = mix(s ^ mix(b + 3 * GOLDEN));
        Rng r(0);
        r.state_ = s;
        return r;
    }

    std::uint64_t next_u64() {
        state_ += GOLDEN;
        return mix(state_);
    }

    // uniform in [0,1) with 53 random bits
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // unbiased integer in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    // standard normal, Marsaglia polar method with one cached variate
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // standard Cauchy via tan transform
    double next_cauchy() {
        double u;
        do {
            u = next_double();
        } while (u == 0.0);
        return std::tan(3.14159265358979323846 * (u - 0.5));
    }

private:
    static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace nomcor
