#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "vitalbeam/core.hpp"

namespace vitalbeam::dsp {

struct BandpassSpec {
    int order = 5;
    double low = 0.0;          // Hz
    double high = 0.0;         // Hz
    double sample_rate = 0.0;  // Hz

    void validate() const {
        if (order < 1) throw std::invalid_argument("bandpass: order must be >= 1");
        if (!(0.0 < low && low < high && high < sample_rate / 2.0))
            throw std::invalid_argument("bandpass: need 0 < low < high < fs/2");
        if (high > 0.95 * sample_rate / 2.0)
            throw std::invalid_argument("bandpass: high edge too close to Nyquist");
    }
};

// One second-order section, direct form coefficients with a0 = 1.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

using SosChain = std::vector<Biquad>;

namespace detail {

// complex divide helper for pole math readability
inline cdouble bilinear(const cdouble& s, double k) { return (k + s) / (k - s); }

}  // namespace detail

// Butterworth band-pass: analog low-pass prototype poles, low-pass to
// band-pass transform around the prewarped edges, bilinear transform, then
// conjugate pole pairs grouped into biquads with one zero at z=+1 and one at
// z=-1 each. Gain is normalized to exactly 1 at the geometric band center.
inline SosChain butterworth_bandpass(const BandpassSpec& spec) {
    spec.validate();
    const double fs = spec.sample_rate;
    const double k = 2.0 * fs;  // bilinear constant
    const double w1 = k * std::tan(kPi * spec.low / fs);   // prewarped rad/s
    const double w2 = k * std::tan(kPi * spec.high / fs);
    const double bw = w2 - w1;
    const double w0 = std::sqrt(w1 * w2);

    // prototype poles on the left unit semicircle
    std::vector<cdouble> proto(spec.order);
    for (int m = 0; m < spec.order; ++m) {
        const double phi = kPi * (2.0 * m + 1.0) / (2.0 * spec.order) + kPi / 2.0;
        proto[m] = std::polar(1.0, phi);
    }

    // each prototype pole maps to a pair of band-pass poles
    std::vector<cdouble> zpoles;
    zpoles.reserve(2 * spec.order);
    for (const auto& p : proto) {
        const cdouble half = 0.5 * bw * p;
        const cdouble disc = std::sqrt(half * half - cdouble(w0 * w0, 0.0));
        zpoles.push_back(detail::bilinear(half + disc, k));
        zpoles.push_back(detail::bilinear(half - disc, k));
    }

    // group into conjugate (or real) pairs
    std::vector<cdouble> upper, real_poles;
    for (const auto& p : zpoles) {
        if (std::abs(p.imag()) < 1e-12)
            real_poles.push_back(p);
        else if (p.imag() > 0.0)
            upper.push_back(p);
    }
    std::sort(upper.begin(), upper.end(),
              [](const cdouble& a, const cdouble& b) { return std::abs(a.imag()) > std::abs(b.imag()); });
    std::sort(real_poles.begin(), real_poles.end(),
              [](const cdouble& a, const cdouble& b) { return a.real() < b.real(); });

    SosChain chain;
    for (const auto& p : upper) {
        Biquad q;
        q.a1 = -2.0 * p.real();
        q.a2 = std::norm(p);
        q.b0 = 1.0;
        q.b1 = 0.0;   // zeros at +1 and -1: (1 - z^-2)
        q.b2 = -1.0;
        chain.push_back(q);
    }
    for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
        Biquad q;
        q.a1 = -(real_poles[i].real() + real_poles[i + 1].real());
        q.a2 = real_poles[i].real() * real_poles[i + 1].real();
        q.b0 = 1.0;
        q.b1 = 0.0;
        q.b2 = -1.0;
        chain.push_back(q);
    }
    if (real_poles.size() % 2 == 1) {  // leftover single real pole
        Biquad q;
        q.a1 = -real_poles.back().real();
        q.a2 = 0.0;
        q.b0 = 1.0;
        q.b1 = 0.0;
        q.b2 = -1.0;
        chain.push_back(q);
    }

    // unit gain at the geometric center of the digital band
    const double fc = std::sqrt(spec.low * spec.high);
    const cdouble z = std::polar(1.0, kTwoPi * fc / fs);
    const cdouble zi = 1.0 / z;
    cdouble h{1.0, 0.0};
    for (const auto& q : chain)
        h *= (q.b0 + q.b1 * zi + q.b2 * zi * zi) / (1.0 + q.a1 * zi + q.a2 * zi * zi);
    const double g = std::abs(h);
    if (!(g > 0.0) || !std::isfinite(g)) throw std::runtime_error("bandpass: degenerate design gain");
    const double per_section = std::pow(1.0 / g, 1.0 / static_cast<double>(chain.size()));
    for (auto& q : chain) {
        q.b0 *= per_section;
        q.b1 *= per_section;
        q.b2 *= per_section;
    }
    return chain;
}

// |H(e^{j 2 pi f / fs})| of the cascade.
inline double sos_magnitude(const SosChain& chain, double freq, double sample_rate) {
    const cdouble zi = std::polar(1.0, -kTwoPi * freq / sample_rate);
    cdouble h{1.0, 0.0};
    for (const auto& q : chain)
        h *= (q.b0 + q.b1 * zi + q.b2 * zi * zi) / (1.0 + q.a1 * zi + q.a2 * zi * zi);
    return std::abs(h);
}

// Pole radii of every section (stability check: all < 1).
inline std::vector<double> sos_pole_radii(const SosChain& chain) {
    std::vector<double> radii;
    for (const auto& q : chain) {
        const cdouble disc = std::sqrt(cdouble(q.a1 * q.a1 - 4.0 * q.a2, 0.0));
        radii.push_back(std::abs((-q.a1 + disc) / 2.0));
        radii.push_back(std::abs((-q.a1 - disc) / 2.0));
    }
    return radii;
}

// Single-pass causal application, direct form II transposed, zero state.
inline std::vector<double> filter_apply(const SosChain& chain, std::span<const double> seq) {
    std::vector<double> out(seq.begin(), seq.end());
    for (const auto& q : chain) {
        double s1 = 0.0, s2 = 0.0;
        for (auto& v : out) {
            const double x = v;
            const double y = q.b0 * x + s1;
            s1 = q.b1 * x - q.a1 * y + s2;
            s2 = q.b2 * x - q.a2 * y;
            v = y;
        }
    }
    return out;
}

}  // namespace vitalbeam::dsp
