#include <catch2/catch_amalgamated.hpp>

#include "vitalbeam/body_model.hpp"
#include "vitalbeam/dsp/fft.hpp"
#include "vitalbeam/simulator.hpp"

using namespace vitalbeam;

namespace {

SceneModel point_target_scene(const Vec3& pos_ground, double reflectivity = 1.0) {
    SceneModel scene;
    Scatterer s;
    s.label = "target";
    s.rest_position = pos_ground;
    s.reflectivity = reflectivity;
    scene.scatterers = {s};
    return scene;
}

std::size_t range_argmax(const DataCube& cube, const RadarConfig& cfg, std::size_t frame,
                         std::size_t chirp, std::size_t ch) {
    auto prof = dsp::range_fft<cfloat>(
        std::span<const cfloat>(cube.chirp_data(frame, chirp, ch), cfg.adc_samples_per_chirp));
    std::size_t best = 0;
    for (std::size_t k = 1; k < prof.size(); ++k)
        if (std::abs(prof[k]) > std::abs(prof[best])) best = k;
    return best;
}

}  // namespace

TEST_CASE("synthesize_frame: empty scene with no noise is all zeros") {
    RadarConfig cfg = default_radar_config();
    auto geo = build_virtual_array(cfg);
    SceneModel scene;
    auto cube = synthesize_frame(cfg, geo, scene, 0);
    for (const auto& v : cube.raw()) REQUIRE(v == cfloat{0.0f, 0.0f});
}

TEST_CASE("synthesize_frame: 2 m broadside target peaks at range bin 23") {
    RadarConfig cfg = default_radar_config();
    auto geo = build_virtual_array(cfg);
    SceneModel scene = point_target_scene({0.0, 2.0, 1.06});  // at radar height: broadside
    auto cube = synthesize_frame(cfg, geo, scene, 0);
    REQUIRE(range_argmax(cube, cfg, 0, 0, 0) == 23);
    REQUIRE(range_argmax(cube, cfg, 0, 100, 7) == 23);
}

TEST_CASE("synthesize_frame: beamformed phase tracks 4*pi/lambda times displacement") {
    RadarConfig cfg = default_radar_config();
    cfg.chirps_per_frame = 64;
    auto geo = build_virtual_array(cfg);

    SceneModel scene;
    Scatterer chest;
    chest.label = "chest";
    chest.rest_position = {0.0, 2.0, 1.27};
    chest.reflectivity = 1.0;
    scene.scatterers = {chest};
    scene.breathing_amplitude = 1.0e-3;
    scene.breathing_frequency = 0.3;
    scene.heart_amplitude = 0.1e-3;
    scene.heart_frequency = 1.1;
    scene.rbm_amplitude = 0.0;

    auto cube = synthesize_frame(cfg, geo, scene, 0);

    const Vec3 rel = chest.rest_position - Vec3{0.0, 0.0, scene.radar_height};
    const double az = rad2deg(std::atan2(rel.x, rel.y));
    const double el = rad2deg(std::atan2(rel.z, std::hypot(rel.x, rel.y)));
    auto w = steering_phasors(geo, az, el);

    const double bin_width = cfg.range_bin_width();
    const std::size_t bin =
        static_cast<std::size_t>(std::floor(rel.norm() / bin_width));

    // 4*pi*Delta_d/lambda for Delta_d = 1 mm is 3.2255 rad at 77 GHz
    REQUIRE(4.0 * kPi * 1e-3 / geo.wavelength == Catch::Approx(3.2255).epsilon(1e-3));

    auto beamformed_phase = [&](std::size_t c) {
        cdouble acc{0.0, 0.0};
        for (std::size_t ch = 0; ch < cfg.n_channels(); ++ch) {
            auto prof = dsp::range_fft<cfloat>(
                std::span<const cfloat>(cube.chirp_data(0, c, ch), cfg.adc_samples_per_chirp));
            acc += prof[bin] * std::conj(w[ch]);
        }
        return std::arg(acc);
    };

    const double chirp_dt = cfg.chirp_period();
    const double p0 = beamformed_phase(0);
    const double d0 = chest_displacement(0.0, scene);
    for (std::size_t c : {5u, 20u, 41u, 63u}) {
        const double dc = chest_displacement(c * chirp_dt, scene);
        double dphi = beamformed_phase(c) - p0;
        double expected = 4.0 * kPi / geo.wavelength * (dc - d0);
        dphi = std::remainder(dphi - expected, kTwoPi) + expected;  // compare modulo 2*pi
        REQUIRE(dphi == Catch::Approx(expected).margin(1e-6));
    }
}

TEST_CASE("synthesize_capture: shapes and slow-time rate") {
    RadarConfig cfg = default_radar_config();
    auto geo = build_virtual_array(cfg);
    SceneModel scene;  // empty: shape check only
    auto cube = synthesize_capture(cfg, geo, scene, 350);
    REQUIRE(cube.n_frames() == 350);
    REQUIRE(cube.n_chirps() == 256);
    REQUIRE(cube.n_channels() == 12);
    REQUIRE(cube.n_samples() == 64);
    REQUIRE(cfg.slow_time_rate() == Catch::Approx(4.1667).epsilon(1e-4));
    REQUIRE(cfg.slow_time_rate() > 4.0);
    // vitals spectrum resolution with 200 frames
    REQUIRE(cfg.slow_time_rate() / 200.0 == Catch::Approx(0.02083).epsilon(1e-3));

    auto one = synthesize_capture(cfg, geo, scene, 1);
    for (const auto& v : one.raw()) REQUIRE(v == cfloat{0.0f, 0.0f});
}

TEST_CASE("synthesize_capture: static point range-bin reciprocity over a range grid") {
    RadarConfig cfg = default_radar_config();
    cfg.chirps_per_frame = 4;
    auto geo = build_virtual_array(cfg);
    const double dr = cfg.range_bin_width();
    for (std::size_t k : {3u, 11u, 23u, 37u, 55u}) {
        const double r = (static_cast<double>(k) + 0.4) * dr;  // off the bin edge
        SceneModel scene = point_target_scene({0.0, r, 1.06});
        auto cube = synthesize_capture(cfg, geo, scene, 1);
        REQUIRE(range_argmax(cube, cfg, 0, 0, 0) == k);
    }
}

TEST_CASE("synthesize_capture: identical seeds give bit-identical cubes") {
    RadarConfig cfg = default_radar_config();
    cfg.chirps_per_frame = 16;
    auto geo = build_virtual_array(cfg);
    SceneModel scene = make_body_scene(Posture::OAR);
    scene.rbm_amplitude = 0.2e-3;
    SimOptions opt;
    opt.noise_std = 0.1;
    opt.dc_offset_amp = 0.05;
    opt.seed = 1234;

    auto a = synthesize_capture(cfg, geo, scene, 6, opt);
    auto b = synthesize_capture(cfg, geo, scene, 6, opt);
    REQUIRE(a.raw() == b.raw());

    opt.seed = 1235;
    auto c = synthesize_capture(cfg, geo, scene, 6, opt);
    REQUIRE(a.raw() != c.raw());
}

TEST_CASE("synthesize: scatterer behind the array plane is a scene error") {
    RadarConfig cfg = default_radar_config();
    auto geo = build_virtual_array(cfg);
    SceneModel scene = point_target_scene({0.0, -1.0, 1.0});
    REQUIRE_THROWS_AS(synthesize_frame(cfg, geo, scene, 0), SceneError);
}

TEST_CASE("data cube round-trips through the VBC1 file format") {
    RadarConfig cfg = default_radar_config();
    cfg.chirps_per_frame = 8;
    auto geo = build_virtual_array(cfg);
    SceneModel scene = point_target_scene({0.3, 1.7, 0.9});
    SimOptions opt;
    opt.noise_std = 0.05;
    opt.seed = 9;
    auto cube = synthesize_capture(cfg, geo, scene, 3, opt);
    cube.config_hash = 0xabcdef0102030405ULL;

    const std::string path = "test_cube_roundtrip.vbc";
    cube.save(path);
    auto loaded = DataCube::load(path);
    std::remove(path.c_str());

    REQUIRE(loaded.n_frames() == cube.n_frames());
    REQUIRE(loaded.raw() == cube.raw());
    REQUIRE(loaded.config_hash == cube.config_hash);
    REQUIRE(loaded.config_echo() == cube.config_echo());
}
