#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "dcp/certificate.hpp"
#include "dcp/scenario.hpp"
#include "dcp/system.hpp"

namespace dcp {

// Locally Lipschitz stabilizing law r(x), consulted by the QP filter.
struct NominalController {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
};

// Min-norm stabilizer r(x) = -max(F_l, 0) / ||L_GV||^2 * L_GV', the same
// magnitude the complementarity controller assigns to its stabilizing part.
NominalController min_norm_clf_nominal(ControlAffineSystem sys,
                                       CertificateFunction clf);

// Safety filter with closed-form solution: passes r(x) through unchanged
// when grad(h)' e + alpha_h(h) >= 0 for e(x) = f(x) + G(x) r(x), otherwise
// subtracts [(grad(h)' e + alpha_h(h)) / ||L_Gh||^2] L_Gh'.
Eigen::VectorXd cbf_qp_control(const ControlAffineSystem& sys,
                               const CertificateFunction& clf,
                               const CertificateFunction& cbf,
                               const NominalController& nominal,
                               const Eigen::VectorXd& x);

// Multipliers and minimizer of
//   min ||u||^2 + penalty * delta^2
//   s.t. F_l + L_GV u <= delta,  F_h + L_Gh u >= 0,
// found by enumerating the four active-set patterns; the relaxation variable
// keeps the stabilization constraint soft while safety stays hard.
struct PenaltyQpSolution {
    Eigen::VectorXd u;
    double delta = 0.0;
    double lambda_clf = 0.0;   // multiplier of the relaxed decrease constraint
    double lambda_cbf = 0.0;   // multiplier of the safety constraint
};

PenaltyQpSolution penalty_clf_cbf_qp_solve(const ControlAffineSystem& sys,
                                           const CertificateFunction& clf,
                                           const CertificateFunction& cbf,
                                           double penalty,
                                           const Eigen::VectorXd& x);

Eigen::VectorXd penalty_clf_cbf_qp_control(const ControlAffineSystem& sys,
                                           const CertificateFunction& clf,
                                           const CertificateFunction& cbf,
                                           double penalty,
                                           const Eigen::VectorXd& x);

enum class WlMode { NaiveNegLgV };
enum class WhMode { Naive, NullSpaceModified };

struct DcpControllerConfig {
    double k = 0.0;     // null-space gain, >= 0
    int wp_sign = +1;   // +1 or -1, held fixed for a whole rollout
    WlMode wl_mode = WlMode::NaiveNegLgV;
    WhMode wh_mode = WhMode::NullSpaceModified;
};

// Full controller evaluation u = w_l u_bar_l + w_h u_bar_h together with the
// pieces the simulation records and the analysis re-derives.
struct ControlOutput {
    Eigen::VectorXd u;
    Eigen::VectorXd w_l;
    Eigen::VectorXd w_h;
    Eigen::VectorXd w_p;   // zero vector in Naive mode
    double u_bar_l = 0.0;  // >= 0
    double u_bar_h = 0.0;  // >= 0
    // diagnostics at x
    double F_l = 0.0;
    double F_h = 0.0;
    Eigen::RowVectorXd lgv;
    Eigen::RowVectorXd lgh;
};

// Unit-norm direction with L_Gh(x) w_p = 0 and G(x) w_p != 0.  For two
// inputs and full-rank G this is the 90-degree rotation of L_Gh', sign +1
// selecting counterclockwise; in higher dimensions the direction comes from
// the null space of [L_Gh; N'] (N spanning the null space of G) and the sign
// fixes the first nonzero component.
Eigen::VectorXd compute_wp(const ControlAffineSystem& sys,
                           const CertificateFunction& cbf,
                           const Eigen::VectorXd& x, int sign);

// The complementarity controller.  The magnitudes (u_bar_l, u_bar_h) solve
// the lower-triangular LCP with a = ||L_GV||^2, c = L_Gh w_l, d = ||L_Gh||^2,
// q = (-F_l, F_h); w_l = -L_GV', w_h = L_Gh' + k w_p.
ControlOutput dcp_control(const ControlAffineSystem& sys,
                          const CertificateFunction& clf,
                          const CertificateFunction& cbf,
                          const DcpControllerConfig& cfg,
                          const Eigen::VectorXd& x);

// What the simulator records at each step: the input plus the two
// complementarity magnitudes (or their QP analogues).
struct StepControl {
    Eigen::VectorXd u;
    double u_bar_l = 0.0;
    double u_bar_h = 0.0;
};

struct ControlLaw {
    std::string name;
    std::function<StepControl(const Eigen::VectorXd&)> eval;
};

// The three feedback laws over a scenario's certificates.  The QP laws
// report u_bar_l/u_bar_h as the coefficients of their solutions along
// w_l = -L_GV' and w_h = L_Gh'.
ControlLaw make_cbf_qp_law(const Scenario& sc);
ControlLaw make_penalty_qp_law(const Scenario& sc, double penalty);
ControlLaw make_dcp_law(const Scenario& sc, const DcpControllerConfig& cfg);

}  // namespace dcp
