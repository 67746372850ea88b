#pragma once

#include <array>

#include "vitalbeam/detect/point_cloud.hpp"

namespace vitalbeam::posture {

inline constexpr std::size_t kGrid = 32;

struct ProjectionBounds {
    double x_lo = -1.25, x_hi = 1.25;
    double y_lo = 0.75, y_hi = 3.25;
    double z_lo = -0.20, z_hi = 2.30;
};

// Two power-weighted 2D histograms of the cloud, each 32x32 and max-normalized
// to [0, 1]: plane 0 is depth-azimuth (y rows, x cols), plane 1 is
// depth-elevation (y rows, z cols).
struct InputTensor {
    std::array<float, 2 * kGrid * kGrid> data{};

    float& at(std::size_t plane, std::size_t row, std::size_t col) {
        return data[(plane * kGrid + row) * kGrid + col];
    }
    float at(std::size_t plane, std::size_t row, std::size_t col) const {
        return data[(plane * kGrid + row) * kGrid + col];
    }
};

inline InputTensor voxelize_projections(const detect::PointCloud& cloud,
                                        const ProjectionBounds& bounds = {}) {
    InputTensor t;
    auto cell = [](double v, double lo, double hi) -> int {
        const double u = (v - lo) / (hi - lo);
        if (u < 0.0 || u >= 1.0) return -1;
        return static_cast<int>(u * static_cast<double>(kGrid));
    };
    for (const auto& p : cloud.points) {
        const int row = cell(p.y, bounds.y_lo, bounds.y_hi);
        const int cx = cell(p.x, bounds.x_lo, bounds.x_hi);
        const int cz = cell(p.z, bounds.z_lo, bounds.z_hi);
        if (row < 0) continue;
        if (cx >= 0) t.at(0, row, cx) += static_cast<float>(p.power);
        if (cz >= 0) t.at(1, row, cz) += static_cast<float>(p.power);
    }
    for (std::size_t plane = 0; plane < 2; ++plane) {
        float peak = 0.0f;
        for (std::size_t r = 0; r < kGrid; ++r)
            for (std::size_t c = 0; c < kGrid; ++c) peak = std::max(peak, t.at(plane, r, c));
        if (peak > 0.0f)
            for (std::size_t r = 0; r < kGrid; ++r)
                for (std::size_t c = 0; c < kGrid; ++c) t.at(plane, r, c) /= peak;
    }
    return t;
}

}  // namespace vitalbeam::posture
