#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "vitalbeam/detect/beamform_map.hpp"
#include "vitalbeam/radar_config.hpp"

namespace vitalbeam::detect {

struct Detection {
    std::size_t range_bin = 0;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
    double power = 0.0;
};

struct CloudPoint {
    std::size_t frame = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double power = 0.0;
};

struct PointCloud {
    std::vector<CloudPoint> points;
    std::size_t frame_index = 0;
};

// x = R sin(az) cos(el), y = R cos(az) cos(el), z = h + R sin(el)
inline Vec3 spherical_to_cartesian(double range_m, double azimuth_deg, double elevation_deg,
                                   double radar_height) {
    const double az = deg2rad(azimuth_deg), el = deg2rad(elevation_deg);
    return {range_m * std::sin(az) * std::cos(el), range_m * std::cos(az) * std::cos(el),
            radar_height + range_m * std::sin(el)};
}

inline void cartesian_to_spherical(const Vec3& p, double radar_height, double& range_m,
                                   double& azimuth_deg, double& elevation_deg) {
    const Vec3 rel{p.x, p.y, p.z - radar_height};
    range_m = rel.norm();
    azimuth_deg = rad2deg(std::atan2(rel.x, rel.y));
    elevation_deg = rad2deg(std::atan2(rel.z, std::hypot(rel.x, rel.y)));
}

// Full single-frame chain: range-azimuth map -> 2D CA-CFAR -> Capon elevation
// per detection -> Cartesian points with per-point power retained.
inline PointCloud frame_pointcloud(const RadarConfig& config, const ArrayGeometry& geometry,
                                   const DataCube& cube, std::size_t frame,
                                   double radar_height = 1.06) {
    FrameCovariances cov(cube, frame, geometry);
    RangeAzimuthMap map = range_azimuth_map(cov, geometry);
    auto cells = cfar_2d(map, config.cfar_guard, config.cfar_training, config.cfar_threshold_db);

    PointCloud cloud;
    cloud.frame_index = frame;
    const double dr = config.range_bin_width();
    for (const auto& cell : cells) {
        Detection det;
        det.range_bin = cell.range_bin;
        det.azimuth_deg = map.azimuth_grid[cell.azimuth_bin];
        det.elevation_deg = capon_elevation(cov, geometry, cell.range_bin, det.azimuth_deg);
        det.power = map.at(cell.range_bin, cell.azimuth_bin);

        const double range_m = static_cast<double>(cell.range_bin) * dr;
        Vec3 p = spherical_to_cartesian(range_m, det.azimuth_deg, det.elevation_deg, radar_height);
        cloud.points.push_back({frame, p.x, p.y, p.z, det.power});
    }
    return cloud;
}

// Plain concatenation keeping per-point source frames; no deduplication.
inline PointCloud accumulate_pointclouds(const std::vector<PointCloud>& clouds) {
    if (clouds.empty()) throw std::invalid_argument("accumulate_pointclouds: empty list");
    PointCloud all;
    all.frame_index = clouds.front().frame_index;
    for (const auto& c : clouds)
        all.points.insert(all.points.end(), c.points.begin(), c.points.end());
    return all;
}

inline void write_pointcloud_csv(const std::string& path, const std::vector<PointCloud>& clouds,
                                 std::uint64_t config_hash) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "# config_hash=%016llx\n", static_cast<unsigned long long>(config_hash));
    std::fprintf(f, "frame,x,y,z,power\n");
    for (const auto& cloud : clouds)
        for (const auto& p : cloud.points)
            std::fprintf(f, "%zu,%.9g,%.9g,%.9g,%.9g\n", p.frame, p.x, p.y, p.z, p.power);
    std::fclose(f);
}

// Reads a point-cloud CSV back into per-frame clouds (indexed by frame id up
// to the maximum present; frames without detections come back empty).
inline std::vector<PointCloud> read_pointcloud_csv(const std::string& path,
                                                   std::uint64_t* config_hash = nullptr) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<CloudPoint> pts;
    char line[512];
    std::size_t max_frame = 0;
    while (std::fgets(line, sizeof line, f)) {
        if (line[0] == '#') {
            unsigned long long h = 0;
            if (config_hash && std::sscanf(line, "# config_hash=%llx", &h) == 1) *config_hash = h;
            continue;
        }
        CloudPoint p;
        if (std::sscanf(line, "%zu,%lf,%lf,%lf,%lf", &p.frame, &p.x, &p.y, &p.z, &p.power) == 5) {
            pts.push_back(p);
            max_frame = std::max(max_frame, p.frame);
        }
    }
    std::fclose(f);
    std::vector<PointCloud> clouds(pts.empty() ? 0 : max_frame + 1);
    for (std::size_t i = 0; i < clouds.size(); ++i) clouds[i].frame_index = i;
    for (const auto& p : pts) clouds[p.frame].points.push_back(p);
    return clouds;
}

}  // namespace vitalbeam::detect
