#pragma once

#include <span>
#include <vector>

#include "vitalbeam/core.hpp"

namespace vitalbeam::dsp {

enum class Window { Rect, Hann };

inline double window_value(Window w, std::size_t n, std::size_t length) {
    if (w == Window::Hann && length > 1)
        return 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(n) / static_cast<double>(length - 1));
    return 1.0;
}

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// iterative radix-2, decimation in time
inline void fft_pow2(std::vector<cdouble>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const cdouble wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline std::vector<cdouble> dft_naive(std::span<const cdouble> in) {
    const std::size_t n = in.size();
    std::vector<cdouble> out(n, cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        cdouble sum{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m)
            sum += in[m] * std::polar(1.0, -kTwoPi * static_cast<double>(k * m % n) / static_cast<double>(n));
        out[k] = sum;
    }
    return out;
}

}  // namespace detail

// Forward DFT, exp(-j*2*pi*k*n/N) convention. Radix-2 for power-of-two sizes,
// direct evaluation otherwise.
inline std::vector<cdouble> fft(std::span<const cdouble> in) {
    if (in.empty()) throw std::invalid_argument("fft: empty input");
    if (!detail::is_pow2(in.size())) return detail::dft_naive(in);
    std::vector<cdouble> a(in.begin(), in.end());
    detail::fft_pow2(a);
    return a;
}

// Fast-time FFT of one chirp; bin k corresponds to range k * range_bin_width.
template <typename C>
inline std::vector<cdouble> range_fft(std::span<const C> chirp, Window window = Window::Rect) {
    std::vector<cdouble> buf(chirp.size());
    for (std::size_t n = 0; n < chirp.size(); ++n)
        buf[n] = cdouble(chirp[n].real(), chirp[n].imag()) * window_value(window, n, chirp.size());
    return fft(buf);
}

}  // namespace vitalbeam::dsp
