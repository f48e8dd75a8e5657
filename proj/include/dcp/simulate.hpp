#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dcp/controllers.hpp"
#include "dcp/scenario.hpp"

namespace dcp {

struct IntegratorConfig {
    double dt = 1e-3;
    double t_max = 30.0;
    // Radius below which the input is frozen to zero and the rollout stops.
    double origin_tol = 1e-3;
    // Speed threshold and consecutive-step count for declaring a non-origin
    // equilibrium; dt * equilibrium_dwell_steps must cover >= 1 time unit.
    double equilibrium_speed_tol = 1e-4;
    int equilibrium_dwell_steps = 2000;
};

enum class Outcome {
    ReachedOrigin,
    UndesiredEquilibrium,
    LeftDomain,
    Timeout,
    Aborted,
};

std::string outcome_name(Outcome o);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXd> inputs;
    std::vector<double> h_values;
    std::vector<double> v_values;
    std::vector<double> u_bar_l;
    std::vector<double> u_bar_h;
    Outcome outcome = Outcome::Timeout;
    // Mean of the dwell window; only set for UndesiredEquilibrium.
    Eigen::VectorXd equilibrium;
    // Only set for Aborted: what the controller threw mid-rollout.
    std::string error;

    double min_h() const;
    double t_end() const { return times.empty() ? 0.0 : times.back(); }
};

// f(x) + G(x) u(x) with u from the law; no origin freeze is applied here.
Eigen::VectorXd closed_loop_field(const ControlAffineSystem& sys,
                                  const ControlLaw& law,
                                  const Eigen::VectorXd& x);

// Fixed-step fourth-order Runge-Kutta rollout from x0.  Requires h(x0) >= 0
// and x0 inside the scenario's domain box.  Termination, checked on the
// recorded states in this order: reached origin (||x|| <= origin_tol),
// left domain, equilibrium dwell complete, t >= t_max.  A controller
// exception mid-rollout yields outcome Aborted with the message attached.
TrajectoryRecord integrate(const Scenario& sc, const ControlLaw& law,
                           const Eigen::VectorXd& x0,
                           const IntegratorConfig& cfg);

// Certificate-condition residuals of a finished record, from forward
// differences of the recorded values.  The class-K terms are evaluated at
// the midpoint of each step's pair so the reported residual reflects the
// condition rather than first-order discretization error.
struct InvariantReport {
    // max over steps with u_bar_h = 0 of dV/dt + alpha_l(V); <= 0 up to
    // integration error when the decrease condition is enforced.
    double max_clf_residual = 0.0;
    // min over all steps of dh/dt + alpha_h(h); negative values flag
    // barrier-condition violations.
    double min_cbf_margin = 0.0;
    double min_h = 0.0;
    int clf_steps = 0;  // number of steps the CLF residual covered
};

InvariantReport monitor_invariants(const TrajectoryRecord& record,
                                   const CertificateFunction& clf,
                                   const CertificateFunction& cbf);

}  // namespace dcp
