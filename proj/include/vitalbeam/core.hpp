#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vitalbeam {

using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
// Radar convention value; keeps beat-frequency and wavelength arithmetic
// on round numbers (77 GHz -> 3.8961 mm).
inline constexpr double kSpeedOfLight = 3.0e8;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

struct Vec2 {
    double x = 0.0;
    double z = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class SceneError : public std::runtime_error {
public:
    explicit SceneError(const std::string& msg) : std::runtime_error(msg) {}
};

class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& msg, std::vector<double> history)
        : std::runtime_error(msg), loss_history(std::move(history)) {}
    std::vector<double> loss_history;
};

class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& msg)
        : std::runtime_error("[" + stage + "] " + msg), stage_name(stage) {}
    std::string stage_name;
};

}  // namespace vitalbeam
