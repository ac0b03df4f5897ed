// Seedable random source shared by every sampler. All variates are derived
// from the raw 64-bit stream with explicit arithmetic so that a fixed seed
// reproduces the same run on any platform.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace isinglo {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    // Independent generator for worker/phase `index`, derived from the base
    // seed only. stream(i) of equal-seeded Rngs agree even after this one
    // has been advanced.
    Rng stream(std::uint64_t index) const {
        return Rng(mix(seed_ + 0x9E3779B97F4A7C15ULL * (index + 1)));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    int spin() { return (next_u64() & 1u) ? +1 : -1; }

    // Uniform integer in [0, n). Rejection keeps the draw unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    // Poisson draw by CDF inversion. Large rates are split into sub-rates of
    // at most 30 via additivity, keeping the term recurrence well scaled.
    std::uint64_t poisson(double rate) {
        if (!(rate >= 0.0)) throw std::invalid_argument("Rng::poisson: rate must be >= 0");
        if (rate == 0.0) return 0;
        if (rate > 30.0) {
            const auto parts = static_cast<std::uint64_t>(std::ceil(rate / 30.0));
            const double sub = rate / static_cast<double>(parts);
            std::uint64_t total = 0;
            for (std::uint64_t i = 0; i < parts; ++i) total += poisson(sub);
            return total;
        }
        const double u = uniform01();
        double term = std::exp(-rate);
        double cum = term;
        std::uint64_t k = 0;
        while (u >= cum) {
            ++k;
            term *= rate / static_cast<double>(k);
            cum += term;
            if (k > 4000) break;  // tail far beyond double resolution
        }
        return k;
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace isinglo
