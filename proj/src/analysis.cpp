#include "dcp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

namespace dcp {

namespace {

using Eigen::Vector2d;
using Eigen::VectorXd;

// March outward from the seed along direction d until h changes sign, then
// bisect.  Returns true and the refined point, or false when the ray exits
// the box while still unsafe.
bool cast_ray(const CertificateFunction& cbf, const VectorXd& seed,
              const Vector2d& dir, const VectorXd& box_min,
              const VectorXd& box_max, VectorXd& out) {
    const double reach = (box_max - box_min).norm();
    constexpr double march = 0.02;
    double lo = 0.0;
    double hi = -1.0;
    for (double r = march; r <= reach; r += march) {
        const VectorXd x = seed + r * dir;
        if ((x.array() < box_min.array()).any() ||
            (x.array() > box_max.array()).any()) {
            return false;
        }
        if (cbf.value(x) >= 0.0) {
            hi = r;
            break;
        }
        lo = r;
    }
    if (hi < 0.0) return false;

    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (cbf.value(seed + mid * dir) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    VectorXd x = seed + hi * dir;
    // One Newton polish knocks |h| down to rounding noise even where the
    // gradient is steep.
    const VectorXd g = cbf.gradient(x);
    const double gsq = g.squaredNorm();
    if (gsq > 1e-20) x -= (cbf.value(x) / gsq) * g;
    if (std::abs(cbf.value(x)) > 1e-10) return false;
    out = x;
    return true;
}

}  // namespace

std::vector<Eigen::VectorXd> sample_boundary(
    const CertificateFunction& cbf, int n_samples,
    const Eigen::VectorXd& box_min, const Eigen::VectorXd& box_max,
    const std::vector<Eigen::VectorXd>& seeds) {
    if (n_samples < 8) {
        throw std::invalid_argument("boundary sampling needs n_samples >= 8");
    }
    if (box_min.size() != 2) {
        throw std::invalid_argument("boundary sampling is planar only");
    }
    if (seeds.empty()) {
        throw SamplingFailure("no interior seeds supplied");
    }
    for (const VectorXd& s : seeds) {
        if (cbf.value(s) >= 0.0) {
            throw SamplingFailure(
                "seed is not interior to the unsafe region (h >= 0 there)");
        }
    }

    std::vector<VectorXd> points;
    const int per_seed =
        static_cast<int>((n_samples + seeds.size() - 1) / seeds.size());
    int skipped = 0;
    for (const VectorXd& seed : seeds) {
        for (int j = 0; j < per_seed; ++j) {
            const double th =
                2.0 * std::numbers::pi * static_cast<double>(j) / per_seed;
            const Vector2d dir(std::cos(th), std::sin(th));
            VectorXd x;
            if (cast_ray(cbf, seed, dir, box_min, box_max, x)) {
                points.push_back(std::move(x));
            } else {
                ++skipped;
            }
        }
    }
    if (skipped > 0) {
        std::fprintf(stderr,
                     "boundary sampling: %d of %d rays found no crossing\n",
                     skipped, per_seed * static_cast<int>(seeds.size()));
    }
    if (points.size() < 8) {
        throw SamplingFailure("fewer than 8 boundary points found");
    }
    return points;
}

std::vector<BoundarySample> classify_boundary(
    const Scenario& sc, const DcpControllerConfig& cfg,
    const std::vector<Eigen::VectorXd>& samples, double nu,
    double alignment_tol) {
    std::vector<BoundarySample> out;
    out.reserve(samples.size());

    for (const VectorXd& x : samples) {
        const ControlOutput co = dcp_control(sc.sys, sc.clf, sc.cbf, cfg, x);
        BoundarySample s;
        s.x = x;
        s.h = sc.cbf.value(x);
        // Gain-independent part of the closed-loop field: drift plus the
        // certificate-direction input terms.
        const Eigen::MatrixXd g = sc.sys.input_matrix(x);
        s.Fu = sc.sys.drift(x) +
               g * (co.w_l * co.u_bar_l + co.lgh.transpose() * co.u_bar_h);
        s.Gwp = g * co.w_p;
        s.u_bar_h = co.u_bar_h;

        const double fu_norm = s.Fu.norm();
        const double gwp_norm = s.Gwp.norm();
        if (fu_norm > 1e-8 && gwp_norm > 1e-12) {
            const double cosang =
                std::clamp((-s.Fu).dot(s.Gwp) / (fu_norm * gwp_norm),
                           -1.0, 1.0);
            s.parallel_residual = std::acos(cosang);
            s.in_Omega = s.parallel_residual <= alignment_tol &&
                         (-s.Fu).dot(s.Gwp) > 0.0;
        } else {
            s.parallel_residual = std::numbers::pi;
        }
        s.in_X = s.in_Omega && s.u_bar_h > 1e-10;
        s.in_Q = s.in_X && s.u_bar_h < nu;
        out.push_back(std::move(s));
    }

    // S needs adjacency: a sample sits in S when the safety magnitude is
    // zero but an X sample lies within twice the sampling gap.
    double gap = 0.0;
    {
        std::vector<double> nearest;
        for (size_t i = 0; i < out.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < out.size(); ++j) {
                if (i == j) continue;
                best = std::min(best, (out[i].x - out[j].x).norm());
            }
            if (std::isfinite(best)) nearest.push_back(best);
        }
        if (!nearest.empty()) {
            std::nth_element(nearest.begin(),
                             nearest.begin() + nearest.size() / 2,
                             nearest.end());
            gap = nearest[nearest.size() / 2];
        }
    }
    for (BoundarySample& s : out) {
        if (!s.in_Omega || s.u_bar_h > 1e-10) continue;
        for (const BoundarySample& t : out) {
            if (t.in_X && (s.x - t.x).norm() <= 2.0 * gap) {
                s.in_S = true;
                break;
            }
        }
    }
    return out;
}

KBoundResult k_lower_bound(const std::vector<BoundarySample>& classified,
                           double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    KBoundResult res;
    res.nu = nu;
    res.inf_Gwp_norm = std::numeric_limits<double>::infinity();
    for (const BoundarySample& s : classified) {
        if (!s.in_X) continue;
        res.x_empty = false;
        ++res.sample_count;
        res.sup_Fu_norm = std::max(res.sup_Fu_norm, s.Fu.norm());
        res.inf_Gwp_norm = std::min(res.inf_Gwp_norm, s.Gwp.norm());
    }
    if (res.x_empty) {
        res.sup_Fu_norm = 0.0;
        res.inf_Gwp_norm = 0.0;
        res.k_lower_bound = 0.0;
        return res;
    }
    if (res.inf_Gwp_norm < 1e-10) {
        throw WpDegeneracy(
            "inf ||G w_p|| over X degenerated to " +
            std::to_string(res.inf_Gwp_norm));
    }
    res.k_lower_bound = res.sup_Fu_norm / (nu * res.inf_Gwp_norm);
    return res;
}

double qp_equilibrium_residual(const ControlAffineSystem& sys,
                               const CertificateFunction& cbf,
                               const NominalController& nominal,
                               const Eigen::VectorXd& x) {
    const VectorXd grad = cbf.gradient(x);
    const Eigen::MatrixXd g = sys.input_matrix(x);
    const Eigen::RowVectorXd lgh = grad.transpose() * g;
    const double lgh_sq = lgh.squaredNorm();
    if (lgh_sq < 1e-20) {
        throw DegenerateGradient("L_Gh vanishes at the queried state");
    }
    const VectorXd e = sys.drift(x) + g * nominal.eval(x);
    const double ge = grad.dot(e);
    if (ge >= 0.0) return std::numeric_limits<double>::infinity();
    return (e - (ge / lgh_sq) * (g * lgh.transpose())).norm();
}

double dcp_equilibrium_residual(const Scenario& sc,
                                const DcpControllerConfig& cfg,
                                const Eigen::VectorXd& x) {
    if (x.norm() < 1e-12) {
        throw std::invalid_argument("residual is undefined at the origin");
    }
    const ControlOutput co = dcp_control(sc.sys, sc.clf, sc.cbf, cfg, x);
    return (sc.sys.drift(x) + sc.sys.input_matrix(x) * co.u).norm();
}

}  // namespace dcp
