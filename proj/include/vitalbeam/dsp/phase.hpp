#pragma once

#include <span>
#include <vector>

#include "vitalbeam/core.hpp"

namespace vitalbeam::dsp {

// Unwraps so successive differences land in (-pi, pi]; first element kept.
inline std::vector<double> unwrap_phase(std::span<const double> seq) {
    if (seq.empty()) throw std::invalid_argument("unwrap_phase: empty sequence");
    std::vector<double> out(seq.size());
    out[0] = seq[0];
    double offset = 0.0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        double d = seq[i] - seq[i - 1];
        while (d > kPi) {
            d -= kTwoPi;
            offset -= kTwoPi;
        }
        while (d <= -kPi) {
            d += kTwoPi;
            offset += kTwoPi;
        }
        out[i] = seq[i] + offset;
    }
    return out;
}

// Consecutive difference; suppresses the breathing fundamental relative to
// the heart harmonic.
inline std::vector<double> diff_phase(std::span<const double> seq) {
    if (seq.size() < 2) throw std::invalid_argument("diff_phase: need at least 2 samples");
    std::vector<double> out(seq.size() - 1);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) out[i] = seq[i + 1] - seq[i];
    return out;
}

}  // namespace vitalbeam::dsp
