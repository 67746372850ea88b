#pragma once

#include <vector>

#include "vitalbeam/array_geometry.hpp"
#include "vitalbeam/data_cube.hpp"
#include "vitalbeam/parallel.hpp"
#include "vitalbeam/radar_config.hpp"
#include "vitalbeam/rng.hpp"
#include "vitalbeam/scene.hpp"

namespace vitalbeam {

struct SimOptions {
    double noise_std = 0.0;      // complex white noise std per raw sample
    double dc_offset_amp = 0.0;  // constant per-channel I/Q offset magnitude
    std::uint64_t seed = 0;
    unsigned threads = 0;        // 0 = hardware concurrency
};

namespace detail {

// Per-channel constant I/Q offsets, phases drawn once per capture so the
// impairment is static over time like a receiver bias.
inline std::vector<cdouble> dc_offsets(const SimOptions& opt, std::size_t n_channels) {
    std::vector<cdouble> off(n_channels, cdouble{0.0, 0.0});
    if (opt.dc_offset_amp > 0.0) {
        Rng rng(derive_seed(opt.seed, 0xDC0FFULL));
        for (auto& o : off) o = std::polar(opt.dc_offset_amp, rng.uniform(0.0, kTwoPi));
    }
    return off;
}

}  // namespace detail

// Dechirped far-field point-scatterer sum for one frame, stored into cube slot
// `store_at` with timestamps taken from `frame_index`. Per scatterer and
// virtual element the tone is
//   A * exp(j*(2*pi*f_beat*t_fast + 4*pi*R(t)/lambda - 2*pi/lambda * p_k.u))
// where R(t) is the instantaneous radar-to-scatterer distance, u the rest
// direction and p_k the virtual element offset. f_beat is frozen at the rest
// range (quasi-static target), so displacement enters only through the
// carrier term and the beamformed slow-time phase is exactly
// 4*pi/lambda * displacement plus a constant. TDM multiplexing is collapsed:
// all virtual channels share one chirp timestamp, chirps spaced n_tx transmit
// slots apart. Vital-sign motion of the chest scatterer and any auxiliary
// oscillation are radial (along u).
inline void synthesize_frame_into(DataCube& cube, const RadarConfig& config,
                                  const ArrayGeometry& geometry, const SceneModel& scene,
                                  std::size_t frame_index, const SimOptions& opt,
                                  std::size_t store_at) {
    if (geometry.n_channels() != config.n_channels())
        throw ConfigError("synthesize_frame: geometry does not match the radar config");
    const std::size_t n_chirps = config.chirps_per_frame;
    const std::size_t n_ch = config.n_channels();
    const std::size_t n_samp = config.adc_samples_per_chirp;
    const double lambda = geometry.wavelength;
    const double t_frame = static_cast<double>(frame_index) * config.frame_duration;
    const double chirp_dt = config.chirp_period();
    const Vec3 radar{0.0, 0.0, scene.radar_height};

    for (const auto& sc : scene.scatterers)
        if (sc.rest_position.y <= 0.0)
            throw SceneError("scatterer '" + sc.label + "' is behind the array plane (y <= 0)");

    const int chest = scene.chest_index();
    const std::size_t n_scat = scene.scatterers.size();

    // rest-range beat tones and per-element steering factors, fixed per frame
    std::vector<double> rest_range(n_scat);
    std::vector<cdouble> tone(n_scat * n_samp);
    std::vector<cdouble> steer(n_scat * n_ch);
    for (std::size_t si = 0; si < n_scat; ++si) {
        const Vec3 rel = scene.scatterers[si].rest_position - radar;
        const double r0 = rel.norm();
        rest_range[si] = r0;
        const Vec3 u = rel * (1.0 / r0);
        const double f_beat = config.beat_frequency(r0);
        const cdouble rot = std::polar(1.0, kTwoPi * f_beat / config.adc_sample_rate);
        cdouble t{1.0, 0.0};
        for (std::size_t n = 0; n < n_samp; ++n) {
            tone[si * n_samp + n] = t;
            t *= rot;
        }
        for (std::size_t k = 0; k < n_ch; ++k)
            steer[si * n_ch + k] =
                std::polar(1.0, -kTwoPi / lambda * geometry.virtual_positions[k].dot(u));
    }

    const auto offsets = detail::dc_offsets(opt, n_ch);
    std::vector<cdouble> acc(n_ch * n_samp);

    for (std::size_t c = 0; c < n_chirps; ++c) {
        std::fill(acc.begin(), acc.end(), cdouble{0.0, 0.0});
        const double t = t_frame + static_cast<double>(c) * chirp_dt;
        for (std::size_t si = 0; si < n_scat; ++si) {
            const auto& sc = scene.scatterers[si];
            double disp = 0.0;
            if (static_cast<int>(si) == chest)
                disp = chest_displacement(t, scene);
            else if (sc.osc_amplitude > 0.0)
                disp = sc.osc_amplitude * std::sin(kTwoPi * sc.osc_frequency * t);
            const double range_now = rest_range[si] + disp;
            const cdouble common =
                sc.reflectivity * std::polar(1.0, 2.0 * kTwoPi * range_now / lambda);
            const cdouble* tn = tone.data() + si * n_samp;
            for (std::size_t ch = 0; ch < n_ch; ++ch) {
                const cdouble f = common * steer[si * n_ch + ch];
                cdouble* dst = acc.data() + ch * n_samp;
                for (std::size_t n = 0; n < n_samp; ++n) dst[n] += f * tn[n];
            }
        }
        // noise drawn per (frame, chirp) stream in channel-then-sample order,
        // independent of scene content and thread schedule
        Rng noise(derive_seed(opt.seed, frame_index, c));
        for (std::size_t ch = 0; ch < n_ch; ++ch) {
            cfloat* dst = &cube.at(store_at, c, ch, 0);
            const cdouble* src = acc.data() + ch * n_samp;
            for (std::size_t n = 0; n < n_samp; ++n) {
                cdouble v = src[n] + offsets[ch];
                if (opt.noise_std > 0.0) v += noise.next_complex_gaussian(opt.noise_std);
                dst[n] = cfloat(static_cast<float>(v.real()), static_cast<float>(v.imag()));
            }
        }
    }
}

// Single-frame cube with timestamps of the given frame index.
inline DataCube synthesize_frame(const RadarConfig& config, const ArrayGeometry& geometry,
                                 const SceneModel& scene, std::size_t frame_index,
                                 const SimOptions& opt = {}) {
    DataCube cube = DataCube::for_config(config, 1);
    synthesize_frame_into(cube, config, geometry, scene, frame_index, opt, 0);
    return cube;
}

// Full capture: frames spaced frame_duration apart, synthesized in parallel
// with per-frame RNG streams derived from (seed, frame index).
inline DataCube synthesize_capture(const RadarConfig& config, const ArrayGeometry& geometry,
                                   const SceneModel& scene, std::size_t n_frames,
                                   const SimOptions& opt = {}) {
    if (n_frames < 1) throw std::invalid_argument("synthesize_capture: n_frames must be >= 1");
    if (scene.chest_index() >= 0) scene.validate();
    DataCube cube = DataCube::for_config(config, n_frames);
    parallel_for(n_frames, [&](std::size_t f) {
        synthesize_frame_into(cube, config, geometry, scene, f, opt, f);
    }, opt.threads);
    return cube;
}

}  // namespace vitalbeam
