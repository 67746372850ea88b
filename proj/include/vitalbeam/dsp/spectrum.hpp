#pragma once

#include <span>
#include <vector>

#include "vitalbeam/dsp/fft.hpp"

namespace vitalbeam::dsp {

struct Spectrum {
    std::vector<double> freqs;  // Hz, ascending, uniform
    std::vector<double> mags;   // linear power per bin
    double resolution = 0.0;    // Hz
};

// One-sided power spectrum. The mean is removed before transforming so DC
// leakage cannot mask the low band edge; zero-padded to nfft.
inline Spectrum spectrum(std::span<const double> seq, double sample_rate, std::size_t nfft,
                         Window window = Window::Hann) {
    if (seq.empty()) throw std::invalid_argument("spectrum: empty sequence");
    if (nfft < seq.size()) throw std::invalid_argument("spectrum: nfft must be >= sequence length");
    double mean = 0.0;
    for (double v : seq) mean += v;
    mean /= static_cast<double>(seq.size());

    std::vector<cdouble> buf(nfft, cdouble{0.0, 0.0});
    for (std::size_t n = 0; n < seq.size(); ++n)
        buf[n] = cdouble((seq[n] - mean) * window_value(window, n, seq.size()), 0.0);
    auto X = fft(buf);

    Spectrum s;
    const std::size_t half = nfft / 2;
    s.resolution = sample_rate / static_cast<double>(nfft);
    s.freqs.resize(half + 1);
    s.mags.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        s.freqs[k] = s.resolution * static_cast<double>(k);
        s.mags[k] = std::norm(X[k]);
    }
    return s;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> band_indices(const Spectrum& s, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("band: low must be < high");
    std::size_t first = s.freqs.size(), last = 0;
    for (std::size_t k = 0; k < s.freqs.size(); ++k)
        if (s.freqs[k] >= lo && s.freqs[k] <= hi) {
            first = std::min(first, k);
            last = std::max(last, k);
        }
    if (first >= s.freqs.size())
        throw std::invalid_argument("band: no spectrum bins inside the band");
    return {first, last};
}

}  // namespace detail

// Frequency of the strongest in-band bin; exact ties resolve toward the lower
// frequency.
inline double peak_pick(const Spectrum& s, double lo, double hi) {
    auto [first, last] = detail::band_indices(s, lo, hi);
    std::size_t best = first;
    for (std::size_t k = first + 1; k <= last; ++k)
        if (s.mags[k] > s.mags[best]) best = k;
    return s.freqs[best];
}

// Peak-to-average power ratio over the band, in dB.
inline double papr(const Spectrum& s, double lo, double hi) {
    auto [first, last] = detail::band_indices(s, lo, hi);
    if (last - first + 1 < 2) throw std::invalid_argument("papr: need at least 2 in-band bins");
    double peak = 0.0, mean = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
        peak = std::max(peak, s.mags[k]);
        mean += s.mags[k];
    }
    mean /= static_cast<double>(last - first + 1);
    if (peak <= 0.0 || mean <= 0.0) throw std::domain_error("papr: band has no power");
    return 10.0 * std::log10(peak / mean);
}

}  // namespace vitalbeam::dsp
