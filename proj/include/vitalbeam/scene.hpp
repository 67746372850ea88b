#pragma once

#include <string>
#include <vector>

#include "vitalbeam/core.hpp"
#include "vitalbeam/rng.hpp"

namespace vitalbeam {

enum class Posture { BAD, OAR, BAR };  // both-arms-down / one-arm-raised / both-arms-raised

inline const char* posture_name(Posture p) {
    switch (p) {
        case Posture::BAD: return "BAD";
        case Posture::OAR: return "OAR";
        case Posture::BAR: return "BAR";
    }
    return "?";
}

struct Scatterer {
    std::string label;
    Vec3 rest_position;       // meters, radar at origin (z up, +y boresight)
    double reflectivity = 1.0;
    // Optional independent radial oscillation for non-chest parts, e.g. a
    // limb interfering inside the heart band. Zero amplitude = static.
    double osc_frequency = 0.0;   // Hz
    double osc_amplitude = 0.0;   // m
};

struct SceneModel {
    std::vector<Scatterer> scatterers;
    double breathing_frequency = 0.30;  // Hz
    double breathing_amplitude = 1.0e-3;  // m
    double heart_frequency = 1.10;      // Hz
    double heart_amplitude = 0.10e-3;   // m
    double rbm_amplitude = 0.0;         // m
    std::uint64_t rbm_seed = 1;
    Posture posture = Posture::BAD;
    double radar_height = 1.06;  // m
    double range = 2.0;          // m

    int chest_index() const {
        for (std::size_t i = 0; i < scatterers.size(); ++i)
            if (scatterers[i].label == "chest") return static_cast<int>(i);
        return -1;
    }

    void validate() const {
        if (breathing_frequency < 0.1 || breathing_frequency > 0.5)
            throw SceneError("scene: breathing_frequency outside [0.1, 0.5] Hz");
        if (heart_frequency < 0.8 || heart_frequency > 1.7)
            throw SceneError("scene: heart_frequency outside [0.8, 1.7] Hz");
        const double total = breathing_amplitude + heart_amplitude + rbm_amplitude;
        if (total < 0.01e-3 || total > 12e-3)
            throw SceneError("scene: chest displacement amplitude outside [0.01, 12] mm");
        int chest_count = 0;
        for (const auto& s : scatterers)
            if (s.label == "chest") ++chest_count;
        if (chest_count != 1) throw SceneError("scene: exactly one scatterer must be labeled 'chest'");
    }
};

namespace detail {

// Each RBM realization is a fixed sum of slow sinusoids below the breathing
// band, so it is a pure function of t and replayable at any timestamp.
struct RbmModel {
    static constexpr int kTones = 6;
    double freq[kTones];
    double phase[kTones];
    double amp[kTones];

    explicit RbmModel(std::uint64_t seed, double amplitude) {
        Rng rng(derive_seed(seed, 0x9bdULL));
        double raw[kTones];
        double peak = 0.0;
        for (int i = 0; i < kTones; ++i) {
            freq[i] = rng.uniform(0.02, 0.09);
            phase[i] = rng.uniform(0.0, kTwoPi);
            raw[i] = rng.uniform(0.3, 1.0);
            peak += raw[i];
        }
        for (int i = 0; i < kTones; ++i) amp[i] = (peak > 0.0) ? amplitude * raw[i] / peak : 0.0;
    }

    double operator()(double t) const {
        double v = 0.0;
        for (int i = 0; i < kTones; ++i) v += amp[i] * std::sin(kTwoPi * freq[i] * t + phase[i]);
        return v;
    }
};

}  // namespace detail

// Radial chest-wall displacement: breathing + heartbeat sinusoids plus seeded
// band-limited random body motion.
inline double chest_displacement(double t, const SceneModel& scene) {
    if (t < 0.0) throw SceneError("chest_displacement: t must be >= 0");
    double d = scene.breathing_amplitude * std::sin(kTwoPi * scene.breathing_frequency * t) +
               scene.heart_amplitude * std::sin(kTwoPi * scene.heart_frequency * t);
    if (scene.rbm_amplitude > 0.0) {
        detail::RbmModel rbm(scene.rbm_seed, scene.rbm_amplitude);
        d += rbm(t);
    }
    return d;
}

}  // namespace vitalbeam
