#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vitalbeam/array_geometry.hpp"
#include "vitalbeam/data_cube.hpp"
#include "vitalbeam/detect/cfar.hpp"
#include "vitalbeam/dsp/fft.hpp"

namespace vitalbeam::detect {

inline constexpr double kAngleSpanDeg = 60.0;  // processing field of view, both axes

inline std::vector<double> angle_grid(double step_deg = 1.0) {
    std::vector<double> grid;
    for (double a = -kAngleSpanDeg; a <= kAngleSpanDeg + 1e-9; a += step_deg) grid.push_back(a);
    return grid;
}

// Per-range-bin spatial covariance of one frame, averaged over chirps:
// R[bin] = sum_c x_c x_c^H / n_chirps with x_c the channel snapshot of the
// range FFT at that bin.
class FrameCovariances {
public:
    FrameCovariances(const DataCube& cube, std::size_t frame, const ArrayGeometry& geometry,
                     dsp::Window window = dsp::Window::Rect) {
        if (cube.n_channels() != geometry.n_channels())
            throw std::invalid_argument("frame covariances: cube channels do not match geometry");
        n_ch_ = cube.n_channels();
        n_bins_ = cube.n_samples();
        cov_.assign(n_bins_, Eigen::MatrixXcd::Zero(n_ch_, n_ch_));
        Eigen::VectorXcd x(n_ch_);
        std::vector<std::vector<cdouble>> profiles(n_ch_);
        for (std::size_t c = 0; c < cube.n_chirps(); ++c) {
            for (std::size_t ch = 0; ch < n_ch_; ++ch)
                profiles[ch] = dsp::range_fft<cfloat>(
                    std::span<const cfloat>(cube.chirp_data(frame, c, ch), cube.n_samples()), window);
            for (std::size_t b = 0; b < n_bins_; ++b) {
                for (std::size_t ch = 0; ch < n_ch_; ++ch) x(ch) = profiles[ch][b];
                cov_[b].noalias() += x * x.adjoint();
            }
        }
        for (auto& m : cov_) m /= static_cast<double>(cube.n_chirps());
    }

    const Eigen::MatrixXcd& at_bin(std::size_t b) const { return cov_[b]; }
    std::size_t n_bins() const { return n_bins_; }
    std::size_t n_channels() const { return n_ch_; }

private:
    std::size_t n_ch_ = 0;
    std::size_t n_bins_ = 0;
    std::vector<Eigen::MatrixXcd> cov_;
};

namespace detail {

inline Eigen::VectorXcd steering_eigen(const ArrayGeometry& geo, double az, double el) {
    auto v = steering_phasors(geo, az, el);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
    return out;
}

}  // namespace detail

inline RangeAzimuthMap range_azimuth_map(const FrameCovariances& cov, const ArrayGeometry& geometry,
                                         double step_deg = 1.0) {
    RangeAzimuthMap map;
    map.azimuth_grid = angle_grid(step_deg);
    map.n_range = cov.n_bins();
    map.n_azimuth = map.azimuth_grid.size();
    map.power.assign(map.n_range * map.n_azimuth, 0.0);
    for (std::size_t a = 0; a < map.n_azimuth; ++a) {
        const Eigen::VectorXcd v = detail::steering_eigen(geometry, map.azimuth_grid[a], 0.0);
        for (std::size_t b = 0; b < map.n_range; ++b) {
            // chirp-averaged conventional beamformer power: v^H R v
            map.at(b, a) = std::real(v.dot(cov.at_bin(b) * v));
        }
    }
    return map;
}

// Conventional beamformer power map of one frame: azimuth steering over the
// virtual columns at zero elevation, non-coherently averaged over chirps.
inline RangeAzimuthMap range_azimuth_map(const DataCube& cube, std::size_t frame,
                                         const ArrayGeometry& geometry, double step_deg = 1.0) {
    return range_azimuth_map(FrameCovariances(cube, frame, geometry), geometry, step_deg);
}

// Capon elevation spectrum argmax at the detected (range bin, azimuth):
// P(theta) = 1 / (v^H R^-1 v) with diagonal loading eps = 1e-3 trace(R)/N.
inline double capon_elevation(const FrameCovariances& cov, const ArrayGeometry& geometry,
                              std::size_t range_bin, double azimuth_deg, double step_deg = 1.0) {
    const std::size_t n = cov.n_channels();
    if (n < 2) throw std::invalid_argument("capon_elevation: need at least 2 channels");
    Eigen::MatrixXcd r = cov.at_bin(range_bin);
    const double eps = 1e-3 * std::real(r.trace()) / static_cast<double>(n);
    r += eps * Eigen::MatrixXcd::Identity(n, n);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(r);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("capon_elevation: covariance singular after loading");

    double best_el = 0.0, best_p = -1.0;
    for (double el : angle_grid(step_deg)) {
        const Eigen::VectorXcd v = detail::steering_eigen(geometry, azimuth_deg, el);
        const double denom = std::real(v.dot(ldlt.solve(v)));
        if (denom <= 0.0) throw std::runtime_error("capon_elevation: non-positive Capon denominator");
        const double p = 1.0 / denom;
        if (p > best_p) {
            best_p = p;
            best_el = el;
        }
    }
    return best_el;
}

inline double capon_elevation(const DataCube& cube, std::size_t frame, const ArrayGeometry& geometry,
                              std::size_t range_bin, double azimuth_deg, double step_deg = 1.0) {
    return capon_elevation(FrameCovariances(cube, frame, geometry), geometry, range_bin, azimuth_deg,
                           step_deg);
}

}  // namespace vitalbeam::detect
