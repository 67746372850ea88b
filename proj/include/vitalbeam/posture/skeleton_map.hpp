#pragma once

#include <optional>

#include "vitalbeam/body_model.hpp"
#include "vitalbeam/keypoints.hpp"
#include "vitalbeam/posture/ellipse_fit.hpp"

namespace vitalbeam::posture {

namespace detail {

inline const Ellipse* find_part(const std::vector<Ellipse>& es, std::string_view label) {
    for (const auto& e : es)
        if (e.label == label) return &e;
    return nullptr;
}

inline Vec2 nearer_endpoint(const Ellipse& e, const Vec2& ref) {
    auto [p, q] = e.major_endpoints();
    const double dp = std::hypot(p.x - ref.x, p.z - ref.z);
    const double dq = std::hypot(q.x - ref.x, q.z - ref.z);
    return dp <= dq ? p : q;
}

inline Vec2 farther_endpoint(const Ellipse& e, const Vec2& ref) {
    auto [p, q] = e.major_endpoints();
    const double dp = std::hypot(p.x - ref.x, p.z - ref.z);
    const double dq = std::hypot(q.x - ref.x, q.z - ref.z);
    return dp > dq ? p : q;
}

inline Vec2 upper_endpoint(const Ellipse& e) {
    auto [p, q] = e.major_endpoints();
    return p.z >= q.z ? p : q;
}

inline Vec2 lower_endpoint(const Ellipse& e) {
    auto [p, q] = e.major_endpoints();
    return p.z < q.z ? p : q;
}

}  // namespace detail

// Maps labeled body-part ellipses onto the 17-keypoint skeleton: centers and
// major-axis endpoints become joints per a fixed table. Parts that were not
// fitted fall back to the posture-template keypoints translated so that the
// template chest lands on the fitted torso center. Requires the torso.
inline Keypoints keypoints_from_ellipses(const EllipseFitResult& fit, double range) {
    using detail::find_part;
    const auto& es = fit.ellipses;
    const Ellipse* torso = find_part(es, "torso");
    if (!torso) throw FitError("keypoints_from_ellipses: no ellipse labeled 'torso'");

    const Keypoints tmpl_kp = body_keypoints(fit.posture, range);
    const Vec2 chest = torso->center;
    const Vec2 shift{chest.x - tmpl_kp.chest().x, chest.z - tmpl_kp.chest().z};
    Keypoints kp;
    for (std::size_t i = 0; i < kNumKeypoints; ++i)  // template fallback
        kp[i] = {tmpl_kp[i].x + shift.x, range, tmpl_kp[i].z + shift.z};

    auto set = [&](std::string_view label, const Vec2& p) {
        kp[keypoint_index(label)] = {p.x, range, p.z};
    };

    set("chest_center", chest);
    const Vec2 neck = detail::upper_endpoint(*torso);
    set("neck", neck);
    if (const Ellipse* head = find_part(es, "head")) set("head", head->center);
    if (const Ellipse* pelvis = find_part(es, "pelvis")) set("pelvis", pelvis->center);
    const Vec2 pelvis_pt{kp[keypoint_index("pelvis")].x, kp[keypoint_index("pelvis")].z};
    set("spine_mid", {(chest.x + pelvis_pt.x) / 2.0, (chest.z + pelvis_pt.z) / 2.0});

    for (int side = 0; side < 2; ++side) {
        const std::string s = side == 0 ? "l_" : "r_";
        std::optional<Vec2> elbow;
        if (const Ellipse* upper = find_part(es, s + "upper_arm")) {
            const Vec2 shoulder = detail::nearer_endpoint(*upper, neck);
            elbow = detail::farther_endpoint(*upper, neck);
            set(s + "shoulder", shoulder);
            set(s + "elbow", *elbow);
        }
        if (const Ellipse* fore = find_part(es, s + "forearm")) {
            const Vec2 ref = elbow ? *elbow : chest;
            if (!elbow) set(s + "elbow", detail::nearer_endpoint(*fore, ref));
            set(s + "wrist", detail::farther_endpoint(*fore, ref));
        }
        if (const Ellipse* leg = find_part(es, s + "leg")) {
            set(s + "hip", detail::upper_endpoint(*leg));
            set(s + "knee", leg->center);
            set(s + "ankle", detail::lower_endpoint(*leg));
        }
    }
    return kp;
}

// Beam-steering angles of the chest keypoint as seen from the radar.
inline std::pair<double, double> chest_from_keypoints(const Keypoints& kp, double radar_height) {
    const Vec3& chest = kp.chest();
    if (!std::isfinite(chest.x) || !std::isfinite(chest.y) || !std::isfinite(chest.z))
        throw std::domain_error("chest_from_keypoints: chest keypoint not finite");
    const double ground = std::hypot(chest.x, chest.y);
    if (ground < 1e-12 && std::abs(chest.z - radar_height) < 1e-12)
        throw std::domain_error("chest_from_keypoints: chest coincides with the radar");
    const double azimuth = rad2deg(std::atan2(chest.x, chest.y));
    const double elevation = rad2deg(std::atan2(chest.z - radar_height, ground));
    return {azimuth, elevation};
}

}  // namespace vitalbeam::posture
