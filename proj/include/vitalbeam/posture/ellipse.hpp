#pragma once

#include <string>
#include <vector>

#include "vitalbeam/core.hpp"

namespace vitalbeam::posture {

// 2D ellipse in the (x, z) plane. rotation is the major-axis angle measured
// from the x axis, normalized to [-pi/2, pi/2); invariant a >= b > 0.
struct Ellipse {
    Vec2 center;
    double a = 1.0;
    double b = 1.0;
    double rotation = 0.0;
    std::string label;

    Vec2 point_at(double t) const {
        const double c = std::cos(rotation), s = std::sin(rotation);
        const double px = a * std::cos(t), pz = b * std::sin(t);
        return {center.x + c * px - s * pz, center.z + s * px + c * pz};
    }

    // Endpoints of the major axis.
    std::pair<Vec2, Vec2> major_endpoints() const {
        const double c = std::cos(rotation), s = std::sin(rotation);
        return {Vec2{center.x + a * c, center.z + a * s}, Vec2{center.x - a * c, center.z - a * s}};
    }

    // Geometric distance from a point to the outline, by Newton refinement of
    // the closest parametric point (good to ~1e-9 for points near the curve).
    double distance(const Vec2& p) const {
        const double c = std::cos(rotation), s = std::sin(rotation);
        const double dx = p.x - center.x, dz = p.z - center.z;
        const double u = c * dx + s * dz;   // ellipse frame
        const double v = -s * dx + c * dz;
        double t = std::atan2(v / b, u / a);
        for (int it = 0; it < 30; ++it) {
            const double ct = std::cos(t), st = std::sin(t);
            const double ex = a * ct - u, ez = b * st - v;
            const double g = -ex * a * st + ez * b * ct;          // d/dt of half squared distance
            const double h = ex * a * (-ct) + a * st * a * st + ez * b * (-st) + b * ct * b * ct;
            if (std::abs(h) < 1e-300) break;
            const double step = g / h;
            t -= step;
            if (std::abs(step) < 1e-12) break;
        }
        const double ex = a * std::cos(t) - u, ez = b * std::sin(t) - v;
        return std::sqrt(ex * ex + ez * ez);
    }

    void normalize() {
        if (b > a) {
            std::swap(a, b);
            rotation += kPi / 2.0;
        }
        while (rotation >= kPi / 2.0) rotation -= kPi;
        while (rotation < -kPi / 2.0) rotation += kPi;
    }

    std::vector<Vec2> sample_outline(int n) const {
        std::vector<Vec2> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) pts.push_back(point_at(kTwoPi * i / n));
        return pts;
    }
};

}  // namespace vitalbeam::posture
