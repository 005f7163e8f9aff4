// Deterministic random number generation. All simulation output is a pure
// function of the seeds passed in; no global state, no std:: distributions
// (their algorithms are implementation-defined and would break cross-stdlib
// reproducibility).
#pragma once

#include <cmath>
#include <cstdint>

namespace jumpbreak {

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// Derives a child seed from (seed, index). Children with distinct indices give
// statistically independent streams; the map is a fixed bijective hash chain,
// so replicate r of a run is reproducible in isolation.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g{seed};
    std::uint64_t base = g.next();
    SplitMix64 h{base ^ (0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL * index)};
    h.next();
    return h.next();
}

// xoshiro256++ (Blackman/Vigna, public domain reference implementation).
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 g{seed};
        for (auto& w : s_) w = g.next();
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

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Sampling front end. Draw order is part of the reproducibility contract:
// callers must not reorder calls between releases.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on the open interval (0,1); never returns an endpoint, so it is
    // safe to feed into logs and inverse tails.
    double uniform01() {
        return (static_cast<double>(gen_.next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Marsaglia polar method; caches the spare deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double exponential() { return -std::log(uniform01()); }

    // Exact Poisson sampling by counting unit-exponential arrivals before
    // `mean`. Cost is O(mean) draws, which is fine for the jump intensities
    // used here (at most a few hundred).
    std::uint64_t poisson(double mean) {
        std::uint64_t k = 0;
        double acc = exponential();
        while (acc <= mean) {
            ++k;
            acc += exponential();
        }
        return k;
    }

  private:
    Xoshiro256pp gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace jumpbreak
