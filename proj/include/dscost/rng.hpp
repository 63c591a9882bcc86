#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dscost {

// splitmix64 finalizer; used to spread user seeds and replicate indices
// before they reach the engine.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4a829fcced5ebULL;
    return x ^ (x >> 31);
}

// mt19937_64 with explicit inverse-CDF sampling, so streams depend only on
// the engine's bit output and not on a standard library's distribution
// implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    // uniform in [0,1) with 53 random bits
    double uniform() {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

    // Knuth product method, chunked so exp(-mean) cannot underflow
    int poisson(double mean) {
        int total = 0;
        while (mean > 500.0) {
            total += poisson_knuth(500.0);
            mean -= 500.0;
        }
        return total + poisson_knuth(mean);
    }

private:
    int poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        int count = -1;
        double prod = 1.0;
        do {
            prod *= uniform();
            ++count;
        } while (prod > limit);
        return count;
    }

    std::mt19937_64 engine_;
};

}  // namespace dscost
