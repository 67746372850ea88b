#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vitalbeam/core.hpp"

namespace vitalbeam::dsp {

struct CircleFit {
    double center_i = 0.0;
    double center_q = 0.0;
    double radius = 0.0;
    double residual = 0.0;  // RMS geometric distance to the fitted circle
};

// I/Q circle fit: algebraic (Kasa) initialization refined by Gauss-Newton on
// geometric distance. Converged when the step norm drops below 1e-10 or after
// 50 iterations. Subtracting the center re-centers the I/Q arc on the origin.
inline CircleFit fit_circle_dc(std::span<const cdouble> iq) {
    const std::size_t n = iq.size();
    if (n < 3) throw FitError("fit_circle_dc: need at least 3 points");

    // Kasa: x^2 + y^2 + D x + E y + F = 0, linear least squares in (D, E, F)
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (const auto& p : iq) {
        const double x = p.real(), y = p.imag();
        const Eigen::Vector3d row(x, y, 1.0);
        ata += row * row.transpose();
        atb += row * (-(x * x + y * y));
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
    if (!lu.isInvertible()) throw FitError("fit_circle_dc: degenerate (collinear) points");
    const Eigen::Vector3d def = lu.solve(atb);
    double cx = -def[0] / 2.0, cy = -def[1] / 2.0;
    double r2 = cx * cx + cy * cy - def[2];
    if (!(r2 > 0.0) || !std::isfinite(r2)) throw FitError("fit_circle_dc: degenerate algebraic fit");
    double r = std::sqrt(r2);

    for (int it = 0; it < 50; ++it) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (const auto& p : iq) {
            const double dx = p.real() - cx, dy = p.imag() - cy;
            const double d = std::hypot(dx, dy);
            if (d < 1e-300) continue;
            const Eigen::Vector3d j(-dx / d, -dy / d, -1.0);
            jtj += j * j.transpose();
            jtr += j * (d - r);
        }
        Eigen::FullPivLU<Eigen::Matrix3d> step_lu(jtj);
        if (!step_lu.isInvertible()) break;
        const Eigen::Vector3d step = step_lu.solve(-jtr);
        cx += step[0];
        cy += step[1];
        r += step[2];
        if (step.norm() < 1e-10) break;
    }
    if (!(r > 0.0) || !std::isfinite(cx) || !std::isfinite(cy))
        throw FitError("fit_circle_dc: refinement diverged");

    double ss = 0.0;
    for (const auto& p : iq) {
        const double d = std::hypot(p.real() - cx, p.imag() - cy) - r;
        ss += d * d;
    }
    CircleFit fit;
    fit.center_i = cx;
    fit.center_q = cy;
    fit.radius = r;
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

}  // namespace vitalbeam::dsp
