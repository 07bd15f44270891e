#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace mobiq {

// Stateless splitmix64 step; used for seeding and stream derivation only.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro256++ generator. All simulation randomness flows through instances of
// this class; draw order is part of the reproducibility contract.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Exponential with the given mean; strictly positive draws except for the
    // 2^-53 atom at zero inherited from uniform().
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // Standard normal via the Marsaglia polar method; one spare is cached,
    // so draw parity affects the stream position.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Deterministic named sub-stream derivation: (master, purpose, index) fully
// determines the stream, so replications and pipeline stages never share or
// reorder draws regardless of scheduling.
inline Rng derive_stream(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0) {
    std::uint64_t x = master;
    std::uint64_t h = splitmix64(x);
    x ^= fnv1a64(purpose);
    h ^= splitmix64(x);
    x ^= 0x85ebca6b0f1c9fd7ULL * (index + 1);
    h ^= splitmix64(x);
    return Rng(h);
}

}  // namespace mobiq
