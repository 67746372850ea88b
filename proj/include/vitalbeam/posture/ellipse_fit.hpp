#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vitalbeam/body_model.hpp"
#include "vitalbeam/posture/ellipse.hpp"

namespace vitalbeam::posture {

// Direct least-squares conic fit constrained to ellipses (Fitzgibbon via the
// numerically stable 3x3 reduction). Points are centered and scaled first.
inline Ellipse fit_one_ellipse(std::span<const Vec2> pts) {
    if (pts.size() < 6) throw std::invalid_argument("fit_one_ellipse: need at least 6 points");

    double mx = 0.0, mz = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        mz += p.z;
    }
    mx /= static_cast<double>(pts.size());
    mz /= static_cast<double>(pts.size());
    double scale = 0.0;
    for (const auto& p : pts) scale += std::hypot(p.x - mx, p.z - mz);
    scale /= static_cast<double>(pts.size());
    if (scale < 1e-12) throw FitError("fit_one_ellipse: degenerate point cloud");

    Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
    for (const auto& p : pts) {
        const double x = (p.x - mx) / scale, y = (p.z - mz) / scale;
        const Eigen::Vector3d d1(x * x, x * y, y * y);
        const Eigen::Vector3d d2(x, y, 1.0);
        s1 += d1 * d1.transpose();
        s2 += d1 * d2.transpose();
        s3 += d2 * d2.transpose();
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu3(s3);
    if (!lu3.isInvertible()) throw FitError("fit_one_ellipse: degenerate conic (collinear points)");
    const Eigen::Matrix3d t = -lu3.solve(s2.transpose());
    const Eigen::Matrix3d m = s1 + s2 * t;
    Eigen::Matrix3d mred;
    mred.row(0) = m.row(2) / 2.0;
    mred.row(1) = -m.row(1);
    mred.row(2) = m.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> es(mred);
    if (es.info() != Eigen::Success) throw FitError("fit_one_ellipse: eigensolver failed");
    Eigen::Vector3d abc = Eigen::Vector3d::Zero();
    bool found = false;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(es.eigenvalues()[i].imag()) > 1e-9) continue;
        Eigen::Vector3d v = es.eigenvectors().col(i).real();
        const double cond = 4.0 * v[0] * v[2] - v[1] * v[1];
        if (cond > 0.0) {
            abc = v;
            found = true;
            break;
        }
    }
    if (!found) throw FitError("fit_one_ellipse: no elliptical solution");
    const Eigen::Vector3d def = t * abc;

    // conic in normalized frame: a x^2 + b xy + c y^2 + d x + e y + f = 0
    const double a = abc[0], b = abc[1], c = abc[2], d = def[0], e = def[1], f = def[2];
    const double den = b * b - 4.0 * a * c;  // negative for ellipses
    const double x0 = (2.0 * c * d - b * e) / den;
    const double y0 = (2.0 * a * e - b * d) / den;
    const double mu = a * x0 * x0 + b * x0 * y0 + c * y0 * y0 + d * x0 + e * y0 + f;

    Eigen::Matrix2d quad;
    quad << a, b / 2.0, b / 2.0, c;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> qes(quad);
    const double l0 = qes.eigenvalues()[0], l1 = qes.eigenvalues()[1];
    const double r0sq = -mu / l0, r1sq = -mu / l1;
    if (!(r0sq > 0.0) || !(r1sq > 0.0)) throw FitError("fit_one_ellipse: non-elliptical quadric");

    Ellipse out;
    // eigenvalue 0 is the smaller one, so its axis is the major axis
    out.a = std::sqrt(r0sq) * scale;
    out.b = std::sqrt(r1sq) * scale;
    out.rotation = std::atan2(qes.eigenvectors().col(0)[1], qes.eigenvectors().col(0)[0]);
    out.center = {x0 * scale + mx, y0 * scale + mz};
    out.normalize();
    return out;
}

struct EllipseFitResult {
    std::vector<Ellipse> ellipses;
    Posture posture = Posture::BAD;  // best-matching template
    double worst_residual = 0.0;     // max point-to-assigned-ellipse distance
};

namespace detail {

struct Cluster {
    std::vector<Vec2> pts;
    Ellipse ellipse;
    double worst = 0.0;
    bool splittable = true;
};

inline double cluster_worst(const Cluster& c) {
    double w = 0.0;
    for (const auto& p : c.pts) w = std::max(w, c.ellipse.distance(p));
    return w;
}

// PCA stand-in for sub-clusters where the constrained conic fit degenerates
// (short, nearly straight arcs): principal directions for the axes, point
// spread for the lengths.
inline Ellipse pca_ellipse(const std::vector<Vec2>& pts) {
    double mx = 0.0, mz = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        mz += p.z;
    }
    mx /= static_cast<double>(pts.size());
    mz /= static_cast<double>(pts.size());
    double sxx = 0.0, sxz = 0.0, szz = 0.0;
    for (const auto& p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxz += (p.x - mx) * (p.z - mz);
        szz += (p.z - mz) * (p.z - mz);
    }
    const double n = static_cast<double>(pts.size());
    Eigen::Matrix2d cov;
    cov << sxx / n, sxz / n, sxz / n, szz / n;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    Ellipse e;
    e.center = {mx, mz};
    e.a = std::max(std::sqrt(std::max(0.0, es.eigenvalues()[1])) * std::sqrt(2.0), 2e-3);
    e.b = std::max(std::sqrt(std::max(0.0, es.eigenvalues()[0])) * std::sqrt(2.0), 1e-3);
    e.rotation = std::atan2(es.eigenvectors().col(1)[1], es.eigenvectors().col(1)[0]);
    e.normalize();
    return e;
}

inline Ellipse fit_or_pca(const std::vector<Vec2>& pts) {
    try {
        return fit_one_ellipse(pts);
    } catch (const FitError&) {
        return pca_ellipse(pts);
    }
}

// Deterministic 2-means over the poorly covered points of the cluster: seeds
// are the farthest residual pair, then every cluster point joins the nearer
// center. Splitting along the residual structure separates touching parts
// that a plain positional split would slice through.
inline bool split_cluster(const Cluster& cluster, double tol, std::vector<Vec2>& lo,
                          std::vector<Vec2>& hi) {
    const auto& pts = cluster.pts;
    if (pts.size() < 12) return false;
    std::vector<Vec2> residual;
    for (const auto& p : pts)
        if (cluster.ellipse.distance(p) > tol) residual.push_back(p);
    if (residual.size() < 2) residual = pts;

    std::size_t ia = 0, ib = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < residual.size(); ++i)
        for (std::size_t j = i + 1; j < residual.size(); ++j) {
            const double d = std::hypot(residual[i].x - residual[j].x, residual[i].z - residual[j].z);
            if (d > best) {
                best = d;
                ia = i;
                ib = j;
            }
        }
    Vec2 ca = residual[ia], cb = residual[ib];
    std::vector<int> assign(residual.size(), 0);
    for (int it = 0; it < 25; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < residual.size(); ++i) {
            const double da = std::hypot(residual[i].x - ca.x, residual[i].z - ca.z);
            const double db = std::hypot(residual[i].x - cb.x, residual[i].z - cb.z);
            const int side = db < da ? 1 : 0;
            if (side != assign[i]) {
                assign[i] = side;
                changed = true;
            }
        }
        Vec2 na{0, 0}, nb{0, 0};
        std::size_t cna = 0, cnb = 0;
        for (std::size_t i = 0; i < residual.size(); ++i) {
            if (assign[i] == 0) {
                na.x += residual[i].x;
                na.z += residual[i].z;
                ++cna;
            } else {
                nb.x += residual[i].x;
                nb.z += residual[i].z;
                ++cnb;
            }
        }
        if (cna == 0 || cnb == 0) return false;
        ca = {na.x / cna, na.z / cna};
        cb = {nb.x / cnb, nb.z / cnb};
        if (!changed) break;
    }
    lo.clear();
    hi.clear();
    for (const auto& p : pts) {
        const double da = std::hypot(p.x - ca.x, p.z - ca.z);
        const double db = std::hypot(p.x - cb.x, p.z - cb.z);
        (db < da ? hi : lo).push_back(p);
    }
    if (lo.size() >= 6 && hi.size() >= 6) return true;

    // fallback: median cut along the fitted major axis
    std::vector<Vec2> sorted = pts;
    const double cr = std::cos(cluster.ellipse.rotation), sr = std::sin(cluster.ellipse.rotation);
    std::sort(sorted.begin(), sorted.end(), [&](const Vec2& a, const Vec2& b) {
        return cr * a.x + sr * a.z < cr * b.x + sr * b.z;
    });
    lo.assign(sorted.begin(), sorted.begin() + sorted.size() / 2);
    hi.assign(sorted.begin() + sorted.size() / 2, sorted.end());
    return lo.size() >= 6 && hi.size() >= 6;
}

// One Lloyd sweep: move every point to its nearest ellipse, refit all
// clusters. Returns false (leaving `clusters` untouched) when the sweep would
// starve or degenerate a cluster.
inline bool reassign_refit(std::vector<Cluster>& clusters) {
    std::vector<std::vector<Vec2>> regrouped(clusters.size());
    for (const auto& c : clusters)
        for (const auto& p : c.pts) {
            std::size_t nearest = 0;
            double dmin = std::numeric_limits<double>::max();
            for (std::size_t e = 0; e < clusters.size(); ++e) {
                const double d = clusters[e].ellipse.distance(p);
                if (d < dmin) {
                    dmin = d;
                    nearest = e;
                }
            }
            regrouped[nearest].push_back(p);
        }
    std::vector<Cluster> swept(clusters.size());
    for (std::size_t e = 0; e < clusters.size(); ++e) {
        if (regrouped[e].size() < 6) return false;
        swept[e].pts = std::move(regrouped[e]);
        try {
            swept[e].ellipse = fit_one_ellipse(swept[e].pts);
        } catch (const FitError&) {
            return false;
        }
    }
    for (auto& c : swept) c.worst = cluster_worst(c);
    clusters = std::move(swept);
    return true;
}

inline double template_match_cost(const std::vector<Ellipse>& fitted,
                                  const std::vector<Ellipse>& tmpl) {
    double cost = 0.0;
    for (const auto& t : tmpl) {
        double best = std::numeric_limits<double>::max();
        for (const auto& f : fitted) {
            const double d = std::hypot(f.center.x - t.center.x, f.center.z - t.center.z) +
                             0.5 * (std::abs(f.a - t.a) + std::abs(f.b - t.b));
            best = std::min(best, d);
        }
        cost += best;
    }
    return cost;
}

}  // namespace detail

// Iterative covering: one direct least-squares fit, then repeatedly split the
// worst-covered cluster (deterministic 2-means) and refit, followed by one
// nearest-ellipse reassignment sweep. The best state seen (by worst residual)
// wins, which makes coverage monotone in max_ellipses. Fitted ellipses are
// labeled by greedy matching against the closest posture template.
inline EllipseFitResult fit_ellipses(std::span<const Vec2> points, std::size_t max_ellipses,
                                     double coverage_tol) {
    if (points.size() < 6) throw std::invalid_argument("fit_ellipses: need at least 6 points");
    if (max_ellipses < 1) throw std::invalid_argument("fit_ellipses: max_ellipses must be >= 1");

    using detail::Cluster;
    std::vector<Cluster> clusters(1);
    clusters[0].pts.assign(points.begin(), points.end());
    clusters[0].ellipse = fit_one_ellipse(clusters[0].pts);
    clusters[0].worst = detail::cluster_worst(clusters[0]);

    auto global_worst = [](const std::vector<Cluster>& cs) {
        double w = 0.0;
        for (const auto& c : cs) w = std::max(w, c.worst);
        return w;
    };

    std::vector<Cluster> best_state = clusters;
    double best_worst = global_worst(clusters);

    while (clusters.size() < max_ellipses && best_worst > coverage_tol) {
        // pick the worst splittable cluster
        int wi = -1;
        for (std::size_t i = 0; i < clusters.size(); ++i)
            if (clusters[i].splittable && (wi < 0 || clusters[i].worst > clusters[wi].worst))
                wi = static_cast<int>(i);
        if (wi < 0) break;

        std::vector<Vec2> lo, hi;
        if (!detail::split_cluster(clusters[wi], coverage_tol, lo, hi)) {
            clusters[wi].splittable = false;
            continue;
        }
        std::vector<Cluster> next = clusters;
        try {
            Cluster a, b;
            a.pts = std::move(lo);
            b.pts = std::move(hi);
            a.ellipse = fit_one_ellipse(a.pts);
            b.ellipse = fit_one_ellipse(b.pts);
            a.worst = detail::cluster_worst(a);
            b.worst = detail::cluster_worst(b);
            next[wi] = std::move(a);
            next.push_back(std::move(b));
        } catch (const FitError&) {
            clusters[wi].splittable = false;
            continue;
        }

        // settle the covering with a few Lloyd sweeps, tracking the best state
        if (global_worst(next) < best_worst) {
            best_worst = global_worst(next);
            best_state = next;
        }
        for (int sweep = 0; sweep < 6; ++sweep) {
            if (!detail::reassign_refit(next)) break;
            const double w = global_worst(next);
            if (w < best_worst) {
                best_worst = w;
                best_state = next;
            }
        }
        clusters = std::move(next);
    }

    EllipseFitResult result;
    result.worst_residual = best_worst;
    for (auto& c : best_state) result.ellipses.push_back(c.ellipse);

    // posture selection and label assignment against the body templates
    double best_cost = std::numeric_limits<double>::max();
    for (Posture p : {Posture::BAD, Posture::OAR, Posture::BAR}) {
        const double cost = detail::template_match_cost(result.ellipses, body_part_template(p));
        if (cost < best_cost) {
            best_cost = cost;
            result.posture = p;
        }
    }
    const auto tmpl = body_part_template(result.posture);
    struct Pair {
        double cost;
        std::size_t part, fit;
    };
    std::vector<Pair> pairs;
    for (std::size_t t = 0; t < tmpl.size(); ++t)
        for (std::size_t f = 0; f < result.ellipses.size(); ++f) {
            const auto& te = tmpl[t];
            const auto& fe = result.ellipses[f];
            pairs.push_back({std::hypot(fe.center.x - te.center.x, fe.center.z - te.center.z) +
                                 0.5 * (std::abs(fe.a - te.a) + std::abs(fe.b - te.b)),
                             t, f});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        if (a.part != b.part) return a.part < b.part;
        return a.fit < b.fit;
    });
    std::vector<bool> part_used(tmpl.size(), false), fit_used(result.ellipses.size(), false);
    for (const auto& pr : pairs) {
        if (part_used[pr.part] || fit_used[pr.fit]) continue;
        part_used[pr.part] = true;
        fit_used[pr.fit] = true;
        result.ellipses[pr.fit].label = tmpl[pr.part].label;
    }
    return result;
}

}  // namespace vitalbeam::posture
