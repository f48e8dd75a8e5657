#include "dcp/controllers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dcp/lcp.hpp"

namespace dcp {

namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

double min_norm_magnitude(const LieData& lv) {
    const double a = lv.lg.squaredNorm();
    if (a > strict_positive_tol) {
        return std::max(lv.F_term, 0.0) / a;
    }
    if (lv.F_term > 1e-10) {
        throw ClfDegeneracy(
            "L_GV vanishes while the decrease condition is violated (F_l = " +
            std::to_string(lv.F_term) + ")");
    }
    return 0.0;
}

}  // namespace

NominalController min_norm_clf_nominal(ControlAffineSystem sys,
                                       CertificateFunction clf) {
    return {[sys = std::move(sys), clf = std::move(clf)](const VectorXd& x) {
        const LieData lv = lie_derivatives(sys, clf, x);
        return VectorXd(-min_norm_magnitude(lv) * lv.lg.transpose());
    }};
}

Eigen::VectorXd cbf_qp_control(const ControlAffineSystem& sys,
                               const CertificateFunction& clf,
                               const CertificateFunction& cbf,
                               const NominalController& nominal,
                               const Eigen::VectorXd& x) {
    const VectorXd r = nominal.eval(x);
#ifndef NDEBUG
    {
        const LieData lv = lie_derivatives(sys, clf, x);
        assert(clf_admissible(lv, r));
    }
#else
    (void)clf;
#endif
    const LieData lh = lie_derivatives(sys, cbf, x);
    const double lgh_sq = lh.lg.squaredNorm();
    if (lgh_sq < 1e-20) {
        throw DegenerateGradient("L_Gh vanishes at the filtered state");
    }
    // grad(h)' (f + G r) + alpha_h(h)
    const double margin = lh.F_term + lh.lg.dot(r);
    if (margin >= 0.0) {
        return r;  // constraint inactive: nominal passes through untouched
    }
    return r - (margin / lgh_sq) * lh.lg.transpose();
}

PenaltyQpSolution penalty_clf_cbf_qp_solve(const ControlAffineSystem& sys,
                                           const CertificateFunction& clf,
                                           const CertificateFunction& cbf,
                                           double penalty,
                                           const Eigen::VectorXd& x) {
    if (!(penalty > 0.0)) {
        throw std::invalid_argument("penalty must be positive");
    }
    const LieData lv = lie_derivatives(sys, clf, x);
    const LieData lh = lie_derivatives(sys, cbf, x);
    if (lh.lg.norm() < 1e-10) {
        throw DegenerateGradient("L_Gh vanishes at the filtered state");
    }

    // Stationarity of the Lagrangian gives u = (l2 b' - l1 a') / 2 and
    // delta = l1 / (2p) for multipliers l1, l2 >= 0 of the two constraints
    // (a = L_GV, b = L_Gh).  Each active set then reduces to a linear solve
    // in the multipliers.
    const VectorXd a = lv.lg.transpose();
    const VectorXd b = lh.lg.transpose();
    const double s1 = 0.5 * a.squaredNorm() + 0.5 / penalty;
    const double s2 = 0.5 * b.squaredNorm();
    const double cab = 0.5 * a.dot(b);
    constexpr double mult_tol = 1e-10;
    constexpr double cons_tol = 1e-9;

    std::vector<PenaltyQpSolution> feasible;
    auto admit = [&](double l1, double l2) {
        if (l1 < -mult_tol || l2 < -mult_tol) return;
        l1 = std::max(l1, 0.0);
        l2 = std::max(l2, 0.0);
        PenaltyQpSolution s;
        s.u = 0.5 * (l2 * b - l1 * a);
        s.delta = l1 / (2.0 * penalty);
        s.lambda_clf = l1;
        s.lambda_cbf = l2;
        if (lv.F_term + a.dot(s.u) > s.delta + cons_tol) return;
        if (lh.F_term + b.dot(s.u) < -cons_tol) return;
        feasible.push_back(std::move(s));
    };

    admit(0.0, 0.0);
    admit(lv.F_term / s1, 0.0);             // decrease constraint active
    admit(0.0, -lh.F_term / s2);            // safety constraint active
    {
        // both active:  [s1 -cab; cab -s2] [l1; l2] = [F_l; F_h]
        const double det = cab * cab - s1 * s2;  // < 0 by Cauchy-Schwarz
        admit((-s2 * lv.F_term + cab * lh.F_term) / det,
              (-cab * lv.F_term + s1 * lh.F_term) / det);
    }

    if (feasible.empty()) {
        throw InfeasibleQp("no KKT-feasible active set (F_l = " +
                           std::to_string(lv.F_term) + ", F_h = " +
                           std::to_string(lh.F_term) + ", ||L_GV|| = " +
                           std::to_string(a.norm()) + ", ||L_Gh|| = " +
                           std::to_string(b.norm()) + ")");
    }
    auto objective = [&](const PenaltyQpSolution& s) {
        return s.u.squaredNorm() + penalty * s.delta * s.delta;
    };
    return *std::min_element(feasible.begin(), feasible.end(),
                             [&](const PenaltyQpSolution& l,
                                 const PenaltyQpSolution& r) {
                                 return objective(l) < objective(r);
                             });
}

Eigen::VectorXd penalty_clf_cbf_qp_control(const ControlAffineSystem& sys,
                                           const CertificateFunction& clf,
                                           const CertificateFunction& cbf,
                                           double penalty,
                                           const Eigen::VectorXd& x) {
    return penalty_clf_cbf_qp_solve(sys, clf, cbf, penalty, x).u;
}

Eigen::VectorXd compute_wp(const ControlAffineSystem& sys,
                           const CertificateFunction& cbf,
                           const Eigen::VectorXd& x, int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("wp sign must be +1 or -1");
    }
    if (sys.declared_rank < 2) {
        throw NoWpDirection(
            "null-space direction needs input-matrix rank >= 2");
    }
    const MatrixXd g = sys.input_matrix(x);
    const RowVectorXd lgh = cbf.gradient(x).transpose() * g;
    const double norm = lgh.norm();
    if (norm < 1e-10) {
        throw DegenerateGradient("L_Gh vanishes; no transversal direction");
    }
    const Eigen::Index m = g.cols();

    VectorXd wp;
    if (m == 2 && sys.declared_rank == 2) {
        // Planar full-rank case: rotate L_Gh' a quarter turn.  The rotation
        // is continuous wherever L_Gh != 0; orienting by the sign of a fixed
        // component would flip the turning direction whenever that component
        // crosses zero along the boundary.
        wp = Vector2d(-lgh(1), lgh(0)) / norm;
        if (sign < 0) wp = -wp;
    } else {
        // Null space of the stack [L_Gh; N'] where N spans the null space of
        // G; orthogonality to N guarantees G wp != 0 for any unit wp.
        Eigen::JacobiSVD<MatrixXd> gsvd(g, Eigen::ComputeFullV);
        std::vector<Eigen::Index> null_cols;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double sv =
                i < gsvd.singularValues().size() ? gsvd.singularValues()(i) : 0.0;
            if (sv < 1e-10) null_cols.push_back(i);
        }
        MatrixXd stack(1 + static_cast<Eigen::Index>(null_cols.size()), m);
        stack.row(0) = lgh / norm;
        for (size_t i = 0; i < null_cols.size(); ++i) {
            stack.row(1 + static_cast<Eigen::Index>(i)) =
                gsvd.matrixV().col(null_cols[i]).transpose();
        }
        Eigen::JacobiSVD<MatrixXd> ssvd(stack, Eigen::ComputeFullV);
        if (stack.rows() >= m &&
            ssvd.singularValues()(m - 1) > 1e-8) {
            throw NoWpDirection(
                "stacked constraint matrix has no null space");
        }
        wp = ssvd.matrixV().col(m - 1);
        wp.normalize();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (std::abs(wp(i)) > 1e-12) {
                if ((wp(i) > 0.0) != (sign > 0)) wp = -wp;
                break;
            }
        }
    }
    if ((g * wp).norm() <= 1e-8) {
        throw NoWpDirection("G w_p vanishes at the queried state");
    }
    return wp;
}

ControlOutput dcp_control(const ControlAffineSystem& sys,
                          const CertificateFunction& clf,
                          const CertificateFunction& cbf,
                          const DcpControllerConfig& cfg,
                          const Eigen::VectorXd& x) {
    if (x.norm() < 1e-12) {
        throw std::invalid_argument("controller is undefined at the origin");
    }
    const LieData lv = lie_derivatives(sys, clf, x);
    const LieData lh = lie_derivatives(sys, cbf, x);

    ControlOutput out;
    out.F_l = lv.F_term;
    out.F_h = lh.F_term;
    out.lgv = lv.lg;
    out.lgh = lh.lg;
    out.w_l = -lv.lg.transpose();
    out.w_p = VectorXd::Zero(sys.input_dim);
    out.w_h = lh.lg.transpose();
    if (cfg.wh_mode == WhMode::NullSpaceModified) {
        out.w_p = compute_wp(sys, cbf, x, cfg.wp_sign);
        out.w_h += cfg.k * out.w_p;
    }

    // Magnitudes solve the triangular LCP
    //   [a 0; c d] z + [-F_l; F_h] >= 0, z >= 0, complementary,
    // with a = -L_GV w_l = ||L_GV||^2, c = L_Gh w_l, and d = ||L_Gh||^2
    // (L_Gh w_h keeps no k term because L_Gh w_p = 0).
    const double a = lv.lg.squaredNorm();
    const double c = lh.lg.dot(out.w_l);
    const double d = lh.lg.squaredNorm();

    if (d > strict_positive_tol &&
        (a > strict_positive_tol || -lv.F_term > strict_positive_tol)) {
        const LcpSolution z =
            solve_triangular_lcp(TriangularLcp(a, c, d, -lv.F_term, lh.F_term));
        out.u_bar_l = z.z1;
        out.u_bar_h = z.z2;
    } else {
        // Degenerate corners the triangular form excludes: L_GV = 0 with
        // F_l ~ 0 (stabilizing magnitude is free to be zero) or L_Gh = 0
        // (no safety authority, admissible only while the condition holds).
        if (a <= strict_positive_tol && lv.F_term > 1e-10) {
            throw ClfDegeneracy(
                "L_GV vanishes while the decrease condition is violated "
                "(F_l = " + std::to_string(lv.F_term) + ")");
        }
        out.u_bar_l =
            a > strict_positive_tol ? solve_scalar_lcp(a, -lv.F_term) : 0.0;
        const double psi = lh.F_term + c * out.u_bar_l;
        if (d > strict_positive_tol) {
            out.u_bar_h = solve_scalar_lcp(d, psi);
        } else if (psi < -1e-8) {
            throw DegenerateGradient(
                "L_Gh vanishes while the barrier condition is active");
        } else {
            out.u_bar_h = 0.0;
        }
    }

    out.u = out.w_l * out.u_bar_l + out.w_h * out.u_bar_h;
    return out;
}

ControlLaw make_cbf_qp_law(const Scenario& sc) {
    NominalController nominal = min_norm_clf_nominal(sc.sys, sc.clf);
    return {"cbf_qp",
            [sys = sc.sys, clf = sc.clf, cbf = sc.cbf,
             nominal = std::move(nominal)](const VectorXd& x) {
                StepControl step;
                step.u = cbf_qp_control(sys, clf, cbf, nominal, x);
                const LieData lv = lie_derivatives(sys, clf, x);
                const LieData lh = lie_derivatives(sys, cbf, x);
                step.u_bar_l = min_norm_magnitude(lv);
                const double margin =
                    lh.F_term - lh.lg.dot(step.u_bar_l * lv.lg.transpose());
                step.u_bar_h =
                    std::max(-margin, 0.0) / lh.lg.squaredNorm();
                return step;
            }};
}

ControlLaw make_penalty_qp_law(const Scenario& sc, double penalty) {
    return {"penalty_qp",
            [sys = sc.sys, clf = sc.clf, cbf = sc.cbf,
             penalty](const VectorXd& x) {
                const PenaltyQpSolution s =
                    penalty_clf_cbf_qp_solve(sys, clf, cbf, penalty, x);
                // u = w_l (l1/2) + w_h (l2/2) along w_l = -L_GV', w_h = L_Gh'
                return StepControl{s.u, 0.5 * s.lambda_clf,
                                   0.5 * s.lambda_cbf};
            }};
}

ControlLaw make_dcp_law(const Scenario& sc, const DcpControllerConfig& cfg) {
    return {"dcp",
            [sys = sc.sys, clf = sc.clf, cbf = sc.cbf,
             cfg](const VectorXd& x) {
                const ControlOutput out = dcp_control(sys, clf, cbf, cfg, x);
                return StepControl{out.u, out.u_bar_l, out.u_bar_h};
            }};
}

}  // namespace dcp
