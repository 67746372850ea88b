#pragma once

#include <vector>

#include "vitalbeam/core.hpp"
#include "vitalbeam/radar_config.hpp"

namespace vitalbeam {

struct ArrayGeometry {
    std::vector<Vec3> virtual_positions;  // meters, length n_tx * n_rx
    double wavelength = 0.0;              // meters

    std::size_t n_channels() const { return virtual_positions.size(); }
};

// Virtual element k*n_rx + j sits at tx[k] + rx[j], scaled from
// half-wavelength units to meters.
inline ArrayGeometry build_virtual_array(const RadarConfig& config) {
    config.validate();
    ArrayGeometry geo;
    geo.wavelength = config.wavelength();
    const double half_wl = geo.wavelength / 2.0;
    geo.virtual_positions.reserve(config.n_channels());
    for (std::size_t k = 0; k < config.n_tx; ++k)
        for (std::size_t j = 0; j < config.n_rx; ++j)
            geo.virtual_positions.push_back((config.tx_positions[k] + config.rx_positions[j]) * half_wl);

    for (std::size_t a = 0; a < geo.virtual_positions.size(); ++a)
        for (std::size_t b = a + 1; b < geo.virtual_positions.size(); ++b)
            if (distance(geo.virtual_positions[a], geo.virtual_positions[b]) < 1e-12)
                throw ConfigError("virtual array: duplicate virtual element positions");
    return geo;
}

// Unit direction of (azimuth, elevation), azimuth from boresight (+y) in the
// x-y plane, elevation from the horizontal plane.
inline Vec3 direction_unit(double azimuth_deg, double elevation_deg) {
    const double az = deg2rad(azimuth_deg);
    const double el = deg2rad(elevation_deg);
    return {std::sin(az) * std::cos(el), std::cos(az) * std::cos(el), std::sin(el)};
}

// Per-element phasors matching the arrival phase of a far-field return from
// (azimuth, elevation); phases are -2*pi/lambda * p.u, the same sign the
// dechirped simulator produces, so a matched snapshot sums coherently.
inline std::vector<cdouble> steering_phasors(const ArrayGeometry& geo, double azimuth_deg,
                                             double elevation_deg) {
    const Vec3 u = direction_unit(azimuth_deg, elevation_deg);
    std::vector<cdouble> v(geo.virtual_positions.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double phase = -kTwoPi / geo.wavelength * geo.virtual_positions[k].dot(u);
        v[k] = std::polar(1.0, phase);
    }
    return v;
}

}  // namespace vitalbeam
