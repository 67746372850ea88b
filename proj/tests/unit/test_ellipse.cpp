#include <catch2/catch_amalgamated.hpp>

#include "vitalbeam/posture/ellipse_fit.hpp"
#include "vitalbeam/posture/skeleton_map.hpp"
#include "vitalbeam/rng.hpp"

using namespace vitalbeam;
using namespace vitalbeam::posture;

namespace {

std::vector<Vec2> sample_ellipse(double cx, double cz, double a, double b, double rot, int n) {
    Ellipse e;
    e.center = {cx, cz};
    e.a = a;
    e.b = b;
    e.rotation = rot;
    return e.sample_outline(n);
}

}  // namespace

TEST_CASE("fit_one_ellipse: exact recovery on noiseless outlines") {
    auto pts = sample_ellipse(0.0, 0.0, 2.0, 1.0, 0.0, 60);
    auto e = fit_one_ellipse(pts);
    REQUIRE(e.center.x == Catch::Approx(0.0).margin(1e-6));
    REQUIRE(e.center.z == Catch::Approx(0.0).margin(1e-6));
    REQUIRE(e.a == Catch::Approx(2.0).margin(1e-6));
    REQUIRE(e.b == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(std::abs(e.rotation) < 1e-6);
}

TEST_CASE("fit_one_ellipse: random centers, axes and rotations") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const double cx = rng.uniform(-2.0, 2.0);
        const double cz = rng.uniform(-2.0, 2.0);
        const double a = rng.uniform(0.5, 3.0);
        const double b = rng.uniform(0.1, a);
        const double rot = rng.uniform(-kPi / 2.0, kPi / 2.0);
        auto pts = sample_ellipse(cx, cz, a, b, rot, 48);
        auto e = fit_one_ellipse(pts);
        REQUIRE(e.center.x == Catch::Approx(cx).margin(1e-6));
        REQUIRE(e.center.z == Catch::Approx(cz).margin(1e-6));
        REQUIRE(e.a == Catch::Approx(a).margin(1e-6));
        REQUIRE(e.b == Catch::Approx(b).margin(1e-6));
    }
}

TEST_CASE("fit_one_ellipse: circle accepts any rotation") {
    auto pts = sample_ellipse(0.5, -0.25, 1.0, 1.0, 0.3, 40);
    auto e = fit_one_ellipse(pts);
    REQUIRE(e.a == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(e.b == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("fit_one_ellipse: error paths") {
    std::vector<Vec2> five{{0, 0}, {1, 0}, {2, 1}, {3, 1}, {1, 2}};
    REQUIRE_THROWS_AS(fit_one_ellipse(five), std::invalid_argument);

    std::vector<Vec2> line;
    for (int i = 0; i < 20; ++i) line.push_back({0.1 * i, 0.2 * i});
    REQUIRE_THROWS_AS(fit_one_ellipse(line), FitError);
}

TEST_CASE("ellipse distance: zero on the outline, accurate near it") {
    Ellipse e;
    e.center = {1.0, -2.0};
    e.a = 2.0;
    e.b = 0.5;
    e.rotation = 0.7;
    for (int i = 0; i < 24; ++i) {
        const Vec2 p = e.point_at(kTwoPi * i / 24.0);
        REQUIRE(e.distance(p) < 1e-9);
    }
    // a point at a known offset along the minor axis
    const Vec2 off{1.0 - 0.6 * std::sin(0.7), -2.0 + 0.6 * std::cos(0.7)};
    REQUIRE(e.distance(off) == Catch::Approx(0.1).margin(1e-6));
}

TEST_CASE("fit_ellipses: single ellipse point set needs one ellipse") {
    auto pts = sample_ellipse(0.2, 1.1, 0.8, 0.3, 0.4, 80);
    auto fit = fit_ellipses(pts, 4, 0.01);
    REQUIRE(fit.ellipses.size() == 1);
    REQUIRE(fit.worst_residual < 1e-6);
    REQUIRE(fit.ellipses[0].a == Catch::Approx(0.8).margin(1e-6));
}

TEST_CASE("fit_ellipses: BAD silhouette torso lands within 5 cm of the chest") {
    SceneModel scene = make_body_scene(Posture::BAD);
    auto sil = render_silhouette(scene);
    auto fit = fit_ellipses(sil.points, 9, 0.03);
    const Ellipse* torso = nullptr;
    for (const auto& e : fit.ellipses)
        if (e.label == "torso") torso = &e;
    REQUIRE(torso != nullptr);
    REQUIRE(std::hypot(torso->center.x - 0.0, torso->center.z - 1.27) < 0.05);
    REQUIRE(fit.posture == Posture::BAD);
}

TEST_CASE("fit_ellipses: residual is monotone non-increasing in max_ellipses") {
    SceneModel scene = make_body_scene(Posture::OAR);
    auto sil = render_silhouette(scene);
    double prev = 1e300;
    for (std::size_t max_e : {1u, 2u, 4u, 6u, 9u}) {
        auto fit = fit_ellipses(sil.points, max_e, 0.001);
        REQUIRE(fit.worst_residual <= prev + 1e-12);
        prev = fit.worst_residual;
    }
}

TEST_CASE("fit_ellipses: posture recognized across all three templates") {
    for (Posture p : {Posture::BAD, Posture::OAR, Posture::BAR}) {
        auto sil = render_silhouette(make_body_scene(p));
        auto fit = fit_ellipses(sil.points, 9, 0.03);
        REQUIRE(fit.posture == p);
    }
}

TEST_CASE("keypoints_from_ellipses: template ellipses map back to template keypoints") {
    for (Posture p : {Posture::BAD, Posture::OAR, Posture::BAR}) {
        EllipseFitResult fit;
        fit.ellipses = body_part_template(p);
        fit.posture = p;
        const Keypoints expected = body_keypoints(p, 2.0);
        const Keypoints got = keypoints_from_ellipses(fit, 2.0);
        for (std::size_t i = 0; i < kNumKeypoints; ++i)
            REQUIRE(distance(got[i], expected[i]) < 1e-9);
    }
}

TEST_CASE("keypoints_from_ellipses: torso alone gives chest at its center") {
    EllipseFitResult fit;
    Ellipse torso;
    torso.center = {0.05, 1.30};
    torso.a = 0.2;
    torso.b = 0.16;
    torso.rotation = -kPi / 2.0;
    torso.label = "torso";
    fit.ellipses = {torso};
    fit.posture = Posture::BAD;
    auto kp = keypoints_from_ellipses(fit, 2.0);
    REQUIRE(kp.chest().x == Catch::Approx(0.05));
    REQUIRE(kp.chest().z == Catch::Approx(1.30));
    REQUIRE(kp.chest().y == Catch::Approx(2.0));
    REQUIRE(kp.all_finite());
}

TEST_CASE("keypoints_from_ellipses: full BAD fit yields 17 finite keypoints") {
    auto sil = render_silhouette(make_body_scene(Posture::BAD));
    auto fit = fit_ellipses(sil.points, 9, 0.03);
    auto kp = keypoints_from_ellipses(fit, 2.0);
    REQUIRE(kp.all_finite());

    auto sil_bar = render_silhouette(make_body_scene(Posture::BAR));
    auto fit_bar = fit_ellipses(sil_bar.points, 9, 0.03);
    auto kp_bar = keypoints_from_ellipses(fit_bar, 2.0);
    REQUIRE(kp_bar[keypoint_index("l_wrist")].z > kp_bar[keypoint_index("head")].z);
    REQUIRE(kp_bar[keypoint_index("r_wrist")].z > kp_bar[keypoint_index("head")].z);
}

TEST_CASE("keypoints_from_ellipses: missing torso is a mapping error") {
    EllipseFitResult fit;
    Ellipse head;
    head.center = {0.0, 1.63};
    head.a = 0.11;
    head.b = 0.085;
    head.label = "head";
    fit.ellipses = {head};
    REQUIRE_THROWS_AS(keypoints_from_ellipses(fit, 2.0), FitError);
}

TEST_CASE("chest_from_keypoints: boresight and arctangent cases") {
    Keypoints kp = body_keypoints(Posture::BAD, 2.0);
    kp[kChestIndex] = {0.0, 2.0, 1.06};
    auto [az0, el0] = chest_from_keypoints(kp, 1.06);
    REQUIRE(az0 == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(el0 == Catch::Approx(0.0).margin(1e-12));

    kp[kChestIndex] = {0.0, 2.0, 1.26};
    auto [az1, el1] = chest_from_keypoints(kp, 1.06);
    REQUIRE(el1 == Catch::Approx(rad2deg(std::atan2(0.2, 2.0))).margin(1e-9));
    REQUIRE(el1 == Catch::Approx(5.71).margin(0.01));

    kp[kChestIndex] = {0.5, 2.0, 1.06};
    auto [az2, el2] = chest_from_keypoints(kp, 1.06);
    REQUIRE(az2 == Catch::Approx(rad2deg(std::atan2(0.5, 2.0))).margin(1e-9));
    REQUIRE(az2 == Catch::Approx(14.04).margin(0.01));

    kp[kChestIndex] = {0.0, 0.0, 1.06};
    REQUIRE_THROWS_AS(chest_from_keypoints(kp, 1.06), std::domain_error);
}
