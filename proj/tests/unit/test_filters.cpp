#include <catch2/catch_amalgamated.hpp>

#include "vitalbeam/dsp/bandpass.hpp"
#include "vitalbeam/rng.hpp"

using namespace vitalbeam;
using namespace vitalbeam::dsp;

TEST_CASE("butterworth_bandpass: breathing band response") {
    BandpassSpec spec{5, 0.1, 0.5, 4.1667};
    auto sos = butterworth_bandpass(spec);
    REQUIRE(sos.size() == 5);

    const double fc = std::sqrt(0.1 * 0.5);  // 0.2236 Hz geometric center
    const double hc = sos_magnitude(sos, fc, spec.sample_rate);
    REQUIRE(hc >= 0.99);
    REQUIRE(hc <= 1.0 + 1e-9);
    REQUIRE(sos_magnitude(sos, 0.0, spec.sample_rate) < 1e-4);

    for (double edge : {0.1, 0.5}) {
        const double db = 20.0 * std::log10(sos_magnitude(sos, edge, spec.sample_rate));
        REQUIRE(db == Catch::Approx(-3.0).margin(0.1));
    }
}

TEST_CASE("butterworth_bandpass: heart band edges at -3 dB") {
    BandpassSpec spec{5, 0.8, 1.7, 4.1667};
    auto sos = butterworth_bandpass(spec);
    for (double edge : {0.8, 1.7}) {
        const double db = 20.0 * std::log10(sos_magnitude(sos, edge, spec.sample_rate));
        REQUIRE(db == Catch::Approx(-3.0).margin(0.1));
    }
    for (double r : sos_pole_radii(sos)) REQUIRE(r < 1.0);
}

TEST_CASE("butterworth_bandpass: narrow first-order band stays stable") {
    BandpassSpec spec{1, 0.2, 0.21, 4.1667};
    auto sos = butterworth_bandpass(spec);
    for (double r : sos_pole_radii(sos)) REQUIRE(r < 1.0);
}

TEST_CASE("butterworth_bandpass: pole radii strictly inside unit circle across designs") {
    for (int order : {1, 2, 3, 5, 8}) {
        BandpassSpec spec{order, 0.15, 1.5, 4.1667};
        for (double r : sos_pole_radii(butterworth_bandpass(spec))) REQUIRE(r < 1.0);
    }
}

TEST_CASE("butterworth_bandpass: rejects bad bands") {
    REQUIRE_THROWS_AS(butterworth_bandpass(BandpassSpec{5, 0.5, 0.1, 4.1667}), std::invalid_argument);
    REQUIRE_THROWS_AS(butterworth_bandpass(BandpassSpec{5, 0.1, 2.05, 4.1667}), std::invalid_argument);
    REQUIRE_THROWS_AS(butterworth_bandpass(BandpassSpec{0, 0.1, 0.5, 4.1667}), std::invalid_argument);
    // high edge over 0.95 * Nyquist
    REQUIRE_THROWS_AS(butterworth_bandpass(BandpassSpec{5, 0.1, 2.0, 4.1667}), std::invalid_argument);
}

TEST_CASE("filter_apply: impulse response follows the recursion, zero in zero out") {
    BandpassSpec spec{2, 0.3, 0.8, 4.1667};
    auto sos = butterworth_bandpass(spec);

    std::vector<double> impulse(32, 0.0);
    impulse[0] = 1.0;
    auto h = filter_apply(sos, impulse);

    // reference: run the difference equations directly
    std::vector<double> x = impulse;
    for (const auto& q : sos) {
        std::vector<double> y(x.size(), 0.0);
        for (std::size_t n = 0; n < x.size(); ++n) {
            y[n] = q.b0 * x[n];
            if (n >= 1) y[n] += q.b1 * x[n - 1] - q.a1 * y[n - 1];
            if (n >= 2) y[n] += q.b2 * x[n - 2] - q.a2 * y[n - 2];
        }
        x = y;
    }
    for (std::size_t n = 0; n < x.size(); ++n) REQUIRE(h[n] == Catch::Approx(x[n]).margin(1e-12));

    auto zeros = filter_apply(sos, std::vector<double>(64, 0.0));
    for (double v : zeros) REQUIRE(v == 0.0);
}

TEST_CASE("filter_apply: in-band tone passes at close to unit amplitude") {
    BandpassSpec spec{5, 0.1, 0.5, 4.1667};
    auto sos = butterworth_bandpass(spec);
    const int n = 600;
    std::vector<double> tone(n);
    for (int i = 0; i < n; ++i) tone[i] = std::sin(kTwoPi * 0.3 * i / spec.sample_rate);
    auto out = filter_apply(sos, tone);
    double rms = 0.0;
    for (int i = n / 2; i < n; ++i) rms += out[i] * out[i];  // steady state half
    rms = std::sqrt(rms / (n / 2));
    REQUIRE(rms >= 0.9 / std::sqrt(2.0));
}
