#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "vitalbeam/core.hpp"

namespace vitalbeam {

inline constexpr std::size_t kNumKeypoints = 17;
inline constexpr std::size_t kChestIndex = 2;

// Fixed label order; 3 coordinates each = 51 regression outputs.
inline constexpr std::array<std::string_view, kNumKeypoints> kKeypointLabels = {
    "head",    "neck",   "chest_center", "l_shoulder", "r_shoulder", "l_elbow",
    "r_elbow", "l_wrist", "r_wrist",     "pelvis",     "l_hip",      "r_hip",
    "l_knee",  "r_knee",  "l_ankle",     "r_ankle",    "spine_mid"};

struct Keypoints {
    std::array<Vec3, kNumKeypoints> coords{};

    Vec3& operator[](std::size_t i) { return coords[i]; }
    const Vec3& operator[](std::size_t i) const { return coords[i]; }

    const Vec3& chest() const { return coords[kChestIndex]; }

    bool all_finite() const {
        for (const auto& c : coords)
            if (!std::isfinite(c.x) || !std::isfinite(c.y) || !std::isfinite(c.z)) return false;
        return true;
    }
};

inline int keypoint_index(std::string_view label) {
    for (std::size_t i = 0; i < kKeypointLabels.size(); ++i)
        if (kKeypointLabels[i] == label) return static_cast<int>(i);
    return -1;
}

}  // namespace vitalbeam
