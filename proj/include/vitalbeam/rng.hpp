#pragma once

#include <cstdint>

#include "vitalbeam/core.hpp"

namespace vitalbeam {

// SplitMix64 stream. Used everywhere instead of <random> engines so that
// identical seeds give identical bit streams on every platform/stdlib.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // standard normal via Box-Muller; one value per call, pair cached
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 1e-300) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = kTwoPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cdouble next_complex_gaussian(double std_total) {
        // total power std_total^2 split evenly between I and Q
        const double s = std_total / std::sqrt(2.0);
        return {s * next_gaussian(), s * next_gaussian()};
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Deterministic stream derivation: children of one master seed never collide
// for distinct tags, so parallel workers can own independent streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    mix.next_u64();
    return mix.next_u64();
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
    return derive_seed(derive_seed(seed, tag_a), tag_b);
}

}  // namespace vitalbeam
