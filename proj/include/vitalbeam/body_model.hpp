#pragma once

#include <string>
#include <vector>

#include "vitalbeam/core.hpp"
#include "vitalbeam/keypoints.hpp"
#include "vitalbeam/posture/ellipse.hpp"
#include "vitalbeam/scene.hpp"

namespace vitalbeam {

inline constexpr std::array<std::string_view, 9> kBodyPartLabels = {
    "head", "torso", "pelvis", "l_upper_arm", "r_upper_arm",
    "l_forearm", "r_forearm", "l_leg", "r_leg"};

struct Silhouette {
    std::vector<Vec2> points;  // (x, z) outline samples of every body part
    Keypoints keypoints;       // exact 3D labels, y = scene range
};

namespace detail {

struct Body2D {
    std::array<Vec2, kNumKeypoints> kp;          // (x, z)
    std::vector<posture::Ellipse> parts;          // 9 labeled part ellipses

    static Body2D make(Posture posture) {
        Body2D body;
        auto& k = body.kp;
        k[0] = {0.0, 1.63};            // head
        k[1] = {0.0, 1.47};            // neck
        k[2] = {0.0, 1.27};            // chest_center
        k[9] = {0.0, 0.975};           // pelvis
        k[16] = {0.0, 1.1225};         // spine_mid
        for (int side = 0; side < 2; ++side) {
            const double s = side == 0 ? -1.0 : 1.0;  // l_* stored first
            k[3 + side] = {s * 0.19, 1.44};           // shoulder
            const bool raised = (posture == Posture::BAR) || (posture == Posture::OAR && side == 1);
            if (raised) {
                k[5 + side] = {s * 0.32, 1.69};       // elbow
                k[7 + side] = {s * 0.40, 1.94};       // wrist
            } else {
                k[5 + side] = {s * 0.225, 1.16};
                k[7 + side] = {s * 0.235, 0.90};
            }
            k[10 + side] = {s * 0.10, 0.975};         // hip
            k[12 + side] = {s * 0.10, 0.5125};        // knee
            k[14 + side] = {s * 0.10, 0.05};          // ankle
        }

        auto segment_ellipse = [](const Vec2& p, const Vec2& q, double half_width,
                                  const std::string& label) {
            posture::Ellipse e;
            e.center = {(p.x + q.x) / 2.0, (p.z + q.z) / 2.0};
            e.a = 0.5 * std::hypot(q.x - p.x, q.z - p.z);
            e.b = half_width;
            e.rotation = std::atan2(q.z - p.z, q.x - p.x);
            e.label = label;
            e.normalize();
            return e;
        };

        posture::Ellipse head;
        head.center = k[0];
        head.a = 0.11;
        head.b = 0.085;
        head.rotation = kPi / 2.0;
        head.label = "head";
        head.normalize();
        body.parts.push_back(head);

        posture::Ellipse torso;
        torso.center = k[2];
        torso.a = 0.20;  // vertical: top endpoint is the neck
        torso.b = 0.16;
        torso.rotation = kPi / 2.0;
        torso.label = "torso";
        torso.normalize();
        body.parts.push_back(torso);

        posture::Ellipse pelvis;
        pelvis.center = k[9];
        pelvis.a = 0.145;  // horizontal
        pelvis.b = 0.095;
        pelvis.rotation = 0.0;
        pelvis.label = "pelvis";
        body.parts.push_back(pelvis);

        body.parts.push_back(segment_ellipse(k[3], k[5], 0.045, "l_upper_arm"));
        body.parts.push_back(segment_ellipse(k[4], k[6], 0.045, "r_upper_arm"));
        body.parts.push_back(segment_ellipse(k[5], k[7], 0.040, "l_forearm"));
        body.parts.push_back(segment_ellipse(k[6], k[8], 0.040, "r_forearm"));
        body.parts.push_back(segment_ellipse(k[10], k[14], 0.070, "l_leg"));
        body.parts.push_back(segment_ellipse(k[11], k[15], 0.070, "r_leg"));
        return body;
    }
};

}  // namespace detail

// Template body-part ellipses for one posture (used both to render the
// silhouette and as the matching template when labeling fitted ellipses).
inline std::vector<posture::Ellipse> body_part_template(Posture posture) {
    return detail::Body2D::make(posture).parts;
}

inline Keypoints body_keypoints(Posture posture, double range) {
    const auto body = detail::Body2D::make(posture);
    Keypoints out;
    for (std::size_t i = 0; i < kNumKeypoints; ++i)
        out[i] = {body.kp[i].x, range, body.kp[i].z};
    return out;
}

// Dense (x, z) outline samples of the posed body plus the exact keypoint
// labels the CNN trains against.
inline Silhouette render_silhouette(const SceneModel& scene, int samples_per_part = 72) {
    Silhouette sil;
    const auto body = detail::Body2D::make(scene.posture);
    for (const auto& part : body.parts) {
        auto pts = part.sample_outline(samples_per_part);
        sil.points.insert(sil.points.end(), pts.begin(), pts.end());
    }
    sil.keypoints = body_keypoints(scene.posture, scene.range);
    return sil;
}

// Populates the scatterer list from the body keypoints; the chest_center
// keypoint becomes the single `chest` scatterer so silhouette and scene stay
// coincident.
inline void populate_body_scatterers(SceneModel& scene) {
    const Keypoints kp = body_keypoints(scene.posture, scene.range);
    const double refl[kNumKeypoints] = {0.45, 0.35, 1.00, 0.40, 0.40, 0.30, 0.30, 0.25, 0.25,
                                        0.60, 0.45, 0.45, 0.35, 0.35, 0.30, 0.30, 0.50};
    scene.scatterers.clear();
    for (std::size_t i = 0; i < kNumKeypoints; ++i) {
        Scatterer s;
        s.label = (i == kChestIndex) ? "chest" : std::string(kKeypointLabels[i]);
        s.rest_position = kp[i];
        s.reflectivity = refl[i];
        scene.scatterers.push_back(s);
    }
}

inline SceneModel make_body_scene(Posture posture) {
    SceneModel scene;
    scene.posture = posture;
    populate_body_scatterers(scene);
    return scene;
}

}  // namespace vitalbeam
