#pragma once

#include <vector>

#include "vitalbeam/core.hpp"

namespace vitalbeam::detect {

// Power map over range bins (rows) by azimuth grid (columns), linear units.
struct RangeAzimuthMap {
    std::size_t n_range = 0;
    std::size_t n_azimuth = 0;
    std::vector<double> power;        // row-major, n_range * n_azimuth
    std::vector<double> azimuth_grid; // degrees, symmetric about 0

    double& at(std::size_t r, std::size_t a) { return power[r * n_azimuth + a]; }
    double at(std::size_t r, std::size_t a) const { return power[r * n_azimuth + a]; }
};

struct CfarCell {
    std::size_t range_bin;
    std::size_t azimuth_bin;

    bool operator==(const CfarCell&) const = default;
};

// Cell-averaging CFAR over a 2D map. A cell is declared iff its power is at
// least the training-ring mean times 10^(threshold_db/10). The ring is the
// (guard+training) box minus the guard box; at the edges both boxes are
// truncated and the mean renormalized by the surviving cell count.
inline std::vector<CfarCell> cfar_2d(const RangeAzimuthMap& map, const int guard[2],
                                     const int training[2], double threshold_db) {
    const long nr = static_cast<long>(map.n_range);
    const long na = static_cast<long>(map.n_azimuth);
    const long g0 = guard[0], g1 = guard[1];
    const long w0 = g0 + training[0], w1 = g1 + training[1];
    if (nr <= 2 * w0 + 1 || na <= 2 * w1 + 1)
        throw std::invalid_argument("cfar_2d: map smaller than 2*(guard+training)+1");
    const double factor = std::pow(10.0, threshold_db / 10.0);

    // summed-area table with a zero row/column border
    std::vector<double> sat(static_cast<std::size_t>((nr + 1) * (na + 1)), 0.0);
    auto sat_at = [&](long r, long a) -> double& { return sat[r * (na + 1) + a]; };
    for (long r = 0; r < nr; ++r)
        for (long a = 0; a < na; ++a)
            sat_at(r + 1, a + 1) =
                map.at(r, a) + sat_at(r, a + 1) + sat_at(r + 1, a) - sat_at(r, a);

    auto box = [&](long r0, long r1, long a0, long a1, double& sum, long& count) {
        r0 = std::max(r0, 0L);
        a0 = std::max(a0, 0L);
        r1 = std::min(r1, nr - 1);
        a1 = std::min(a1, na - 1);
        sum = sat_at(r1 + 1, a1 + 1) - sat_at(r0, a1 + 1) - sat_at(r1 + 1, a0) + sat_at(r0, a0);
        count = (r1 - r0 + 1) * (a1 - a0 + 1);
    };

    std::vector<CfarCell> hits;
    for (long r = 0; r < nr; ++r)
        for (long a = 0; a < na; ++a) {
            double outer_sum, guard_sum;
            long outer_n, guard_n;
            box(r - w0, r + w0, a - w1, a + w1, outer_sum, outer_n);
            box(r - g0, r + g0, a - g1, a + g1, guard_sum, guard_n);
            const long train_n = outer_n - guard_n;
            if (train_n <= 0) continue;
            const double mean = (outer_sum - guard_sum) / static_cast<double>(train_n);
            // power > 0 keeps a degenerate all-zero map from firing everywhere
            if (map.at(r, a) > 0.0 && map.at(r, a) >= mean * factor)
                hits.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(a)});
        }
    return hits;
}

}  // namespace vitalbeam::detect
