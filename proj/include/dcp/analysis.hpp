#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dcp/controllers.hpp"
#include "dcp/scenario.hpp"

namespace dcp {

// One boundary point with the quantities deciding whether the closed loop
// can come to rest there.  Omega: -Fu is parallel to G w_p, same direction,
// with Fu != 0.  X: Omega and the safety magnitude is active (u_bar_h > 0).
// Q: X and u_bar_h < nu.  S: Omega with u_bar_h = 0 adjacent to X.
// Membership is nested: Q implies X implies Omega.
struct BoundarySample {
    Eigen::VectorXd x;
    double h = 0.0;
    Eigen::VectorXd Fu;    // drift plus certificate-direction input terms
    Eigen::VectorXd Gwp;   // G(x) w_p(x)
    double u_bar_h = 0.0;
    // Angle in radians between -Fu and G w_p; zero means exactly aligned.
    double parallel_residual = 0.0;
    bool in_Omega = false;
    bool in_X = false;
    bool in_S = false;
    bool in_Q = false;
};

// Sample count, sup/inf ingredients, and the resulting gain bound
// k > sup ||F_u|| / (nu inf ||G w_p||) taken over the X samples.
struct KBoundResult {
    double nu = 0.0;
    double sup_Fu_norm = 0.0;
    double inf_Gwp_norm = 0.0;
    double k_lower_bound = 0.0;
    int sample_count = 0;  // samples classified in X
    bool x_empty = true;   // no X samples: no gain is needed at all
};

// Points with |h| <= 1e-10, found by casting rays from each interior seed
// (h(seed) < 0 required) and bisecting the sign change; samples are ordered
// by angle within each seed's ring.  Rays that never leave the unsafe region
// inside the box are skipped; fewer than 8 points raises SamplingFailure.
// Planar states only.
std::vector<Eigen::VectorXd> sample_boundary(
    const CertificateFunction& cbf, int n_samples,
    const Eigen::VectorXd& box_min, const Eigen::VectorXd& box_max,
    const std::vector<Eigen::VectorXd>& seeds);

std::vector<BoundarySample> classify_boundary(
    const Scenario& sc, const DcpControllerConfig& cfg,
    const std::vector<Eigen::VectorXd>& samples, double nu,
    double alignment_tol = 1e-3);

// Requires classification with the same nu.  Empty X yields bound zero with
// the x_empty flag set; inf ||G w_p|| below 1e-10 raises WpDegeneracy.
KBoundResult k_lower_bound(const std::vector<BoundarySample>& classified,
                           double nu);

// Distance of e(x) = f + G r from the one-dimensional equilibrium profile of
// the safety-filtered loop; returns +infinity when grad(h)' e >= 0 (the
// filter is inactive or pushing outward, so no boundary rest point forms).
double qp_equilibrium_residual(const ControlAffineSystem& sys,
                               const CertificateFunction& cbf,
                               const NominalController& nominal,
                               const Eigen::VectorXd& x);

// Norm of the complementarity closed-loop field at x; zero exactly at
// closed-loop equilibria.
double dcp_equilibrium_residual(const Scenario& sc,
                                const DcpControllerConfig& cfg,
                                const Eigen::VectorXd& x);

}  // namespace dcp
