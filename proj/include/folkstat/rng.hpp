#pragma once
// Seeded randomness with a platform-pinned stream.
//
// std::mt19937_64 output is specified bit-for-bit by the standard, but the
// std::*_distribution adaptors are not, so golden fixtures generated with
// them would differ between standard libraries.  This wrapper does its own
// (portable) reductions: rejection sampling for bounded integers and the
// 53-bit mantissa trick for unit doubles.

#include <cstdint>
#include <random>
#include <span>

namespace folkstat {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n); unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit)
            v = engine_();
        return v % n;
    }

    // Uniform in [0, 1) with 53 significant bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Index drawn proportionally to weights; total must equal their sum.
    std::size_t weighted_index(std::span<const std::uint64_t> weights, std::uint64_t total) {
        std::uint64_t target = below(total);
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (target < weights[i])
                return i;
            target -= weights[i];
        }
        return weights.size() - 1; // unreachable when total == sum(weights)
    }

    // Independent substream; (seed, salt) -> stream does not depend on how
    // many values the parent has produced, which keeps per-user / per-trial
    // draws independent of iteration order and worker count.
    Rng derive(std::uint64_t salt) const { return Rng(splitmix64(seed_ ^ splitmix64(salt))); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace folkstat
