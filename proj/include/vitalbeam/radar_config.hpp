#pragma once

#include <cstddef>
#include <vector>

#include "vitalbeam/core.hpp"

namespace vitalbeam {

// FMCW chirp/frame/array parameterization. Antenna positions are given in
// units of half a carrier wavelength; build_virtual_array() scales to meters.
struct RadarConfig {
    double carrier_frequency = 77e9;   // Hz
    double chirp_slope = 60e12;        // Hz/s (60 MHz/us)
    double idle_time = 250e-6;         // s
    double adc_start_time = 10e-6;     // s
    double ramp_end_time = 60e-6;      // s
    double adc_sample_rate = 2.2e6;    // samples/s
    std::size_t adc_samples_per_chirp = 64;
    std::size_t chirps_per_frame = 256;
    double frame_duration = 0.240;     // s
    std::size_t n_tx = 3;
    std::size_t n_rx = 4;
    std::vector<Vec3> tx_positions;    // half-wavelength units
    std::vector<Vec3> rx_positions;    // half-wavelength units

    int cfar_guard[2] = {8, 8};
    int cfar_training[2] = {8, 8};
    double cfar_threshold_db = 10.0;

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }

    // Chirp repetition interval of one virtual (TDM-collapsed) chirp: the
    // n_tx transmitters take turns, so consecutive rows of the virtual array
    // snapshot are n_tx chirp slots apart.
    double chirp_period() const { return static_cast<double>(n_tx) * (idle_time + ramp_end_time); }

    double adc_window() const { return static_cast<double>(adc_samples_per_chirp) / adc_sample_rate; }

    // Effective swept bandwidth seen by the ADC window, not the full ramp.
    double effective_bandwidth() const { return chirp_slope * adc_window(); }

    double range_bin_width() const { return kSpeedOfLight / (2.0 * effective_bandwidth()); }

    double beat_frequency(double range_m) const { return 2.0 * chirp_slope * range_m / kSpeedOfLight; }

    std::size_t n_channels() const { return n_tx * n_rx; }

    double slow_time_rate() const { return 1.0 / frame_duration; }

    void validate() const {
        if (carrier_frequency <= 0 || chirp_slope <= 0 || idle_time <= 0 || adc_start_time <= 0 ||
            ramp_end_time <= 0 || adc_sample_rate <= 0 || frame_duration <= 0)
            throw ConfigError("radar config: all rates and times must be strictly positive");
        if (adc_samples_per_chirp == 0 || chirps_per_frame == 0 || n_tx == 0 || n_rx == 0)
            throw ConfigError("radar config: counts must be strictly positive");
        if (adc_window() > ramp_end_time - adc_start_time)
            throw ConfigError("radar config: ADC window does not fit inside the ramp");
        if (tx_positions.size() != n_tx)
            throw ConfigError("radar config: tx_positions size != n_tx");
        if (rx_positions.size() != n_rx)
            throw ConfigError("radar config: rx_positions size != n_rx");
        if (cfar_guard[0] < 0 || cfar_guard[1] < 0 || cfar_training[0] <= 0 || cfar_training[1] <= 0)
            throw ConfigError("radar config: bad CFAR window sizes");
    }
};

// AWR1843-like layout: 8 distinct azimuth columns, the middle TX raised by
// half a wavelength to give two elevation rows.
inline RadarConfig default_radar_config() {
    RadarConfig cfg;
    cfg.tx_positions = {{0.0, 0.0, 0.0}, {2.0, 0.0, 1.0}, {4.0, 0.0, 0.0}};
    cfg.rx_positions = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {3.0, 0.0, 0.0}};
    return cfg;
}

}  // namespace vitalbeam
