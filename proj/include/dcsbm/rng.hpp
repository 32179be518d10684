#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dcsbm {

// SplitMix64 finalizer, used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64_mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed splitting rule: stream k of a master seed. Every per-instance and
// per-trial seed in the code base is derived through this function, so any
// single run can be reproduced in isolation from (master, k).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64_mix(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

// Seedable portable generator. The engine is std::mt19937_64, whose output
// sequence is fully specified by the standard; all real/int/Poisson draws
// below are implemented directly on the raw 64-bit stream because the
// std::*_distribution classes are implementation-defined and would break
// cross-platform reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform on [0,1) with 53 random bits
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on the half-open interval [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // unbiased integer in [0, bound), bound >= 1, by rejection
    std::uint64_t uniform_int(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t u;
        do {
            u = next_u64();
        } while (u >= limit);
        return u % bound;
    }

    // Poisson draw via Knuth's product-of-uniforms method. Means are split
    // into chunks of at most 16 so exp(-mean) never underflows; exact for
    // the tiny rates used by the graph sampler.
    long poisson(double mean) {
        long total = 0;
        while (mean > 16.0) {
            total += poisson_small(16.0);
            mean -= 16.0;
        }
        return total + poisson_small(mean);
    }

private:
    long poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    std::mt19937_64 eng_;
};

} // namespace dcsbm
