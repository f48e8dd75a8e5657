#include "dcp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dcp {

namespace {

using Eigen::VectorXd;

bool inside_box(const VectorXd& x, const VectorXd& lo, const VectorXd& hi) {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

}  // namespace

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::ReachedOrigin: return "ReachedOrigin";
        case Outcome::UndesiredEquilibrium: return "UndesiredEquilibrium";
        case Outcome::LeftDomain: return "LeftDomain";
        case Outcome::Timeout: return "Timeout";
        case Outcome::Aborted: return "Aborted";
    }
    return "Unknown";
}

double TrajectoryRecord::min_h() const {
    double m = std::numeric_limits<double>::infinity();
    for (double h : h_values) m = std::min(m, h);
    return m;
}

Eigen::VectorXd closed_loop_field(const ControlAffineSystem& sys,
                                  const ControlLaw& law,
                                  const Eigen::VectorXd& x) {
    return sys.drift(x) + sys.input_matrix(x) * law.eval(x).u;
}

TrajectoryRecord integrate(const Scenario& sc, const ControlLaw& law,
                           const Eigen::VectorXd& x0,
                           const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_max > 0.0)) {
        throw std::invalid_argument("integrator needs dt > 0 and t_max > 0");
    }
    if (cfg.dt * cfg.equilibrium_dwell_steps < 1.0) {
        throw std::invalid_argument(
            "equilibrium dwell must cover at least one time unit");
    }
    if (sc.cbf.value(x0) < 0.0) {
        throw std::invalid_argument("initial state is outside the safe set");
    }
    if (!inside_box(x0, sc.domain_min, sc.domain_max)) {
        throw std::invalid_argument("initial state is outside the domain box");
    }

    const int n = sc.sys.state_dim;
    const VectorXd zero_u = VectorXd::Zero(sc.sys.input_dim);

    // Stage evaluations use the live controller everywhere except the
    // origin point itself, where the laws are undefined; the origin_tol
    // freeze applies only to the terminal recorded row.
    auto field = [&](const VectorXd& x) -> VectorXd {
        if (x.norm() < 1e-12) return sc.sys.drift(x);
        return sc.sys.drift(x) + sc.sys.input_matrix(x) * law.eval(x).u;
    };

    TrajectoryRecord rec;
    VectorXd x = x0;
    int dwell = 0;
    VectorXd dwell_sum = VectorXd::Zero(n);

    for (int i = 0;; ++i) {
        const double t = i * cfg.dt;
        const bool at_origin = x.norm() <= cfg.origin_tol;

        StepControl step;
        if (at_origin) {
            step = {zero_u, 0.0, 0.0};
        } else {
            try {
                step = law.eval(x);
            } catch (const std::exception& e) {
                rec.outcome = Outcome::Aborted;
                rec.error = e.what();
                return rec;
            }
        }
        rec.times.push_back(t);
        rec.states.push_back(x);
        rec.inputs.push_back(step.u);
        rec.h_values.push_back(sc.cbf.value(x));
        rec.v_values.push_back(sc.clf.value(x));
        rec.u_bar_l.push_back(step.u_bar_l);
        rec.u_bar_h.push_back(step.u_bar_h);

        if (at_origin) {
            rec.outcome = Outcome::ReachedOrigin;
            return rec;
        }
        if (!inside_box(x, sc.domain_min, sc.domain_max)) {
            rec.outcome = Outcome::LeftDomain;
            return rec;
        }
        if (dwell >= cfg.equilibrium_dwell_steps) {
            rec.outcome = Outcome::UndesiredEquilibrium;
            rec.equilibrium = dwell_sum / dwell;
            return rec;
        }
        if (t >= cfg.t_max) {
            rec.outcome = Outcome::Timeout;
            return rec;
        }

        VectorXd k1, k2, k3, k4, xn;
        try {
            k1 = field(x);
            k2 = field(x + 0.5 * cfg.dt * k1);
            k3 = field(x + 0.5 * cfg.dt * k2);
            k4 = field(x + cfg.dt * k3);
            xn = x + (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } catch (const std::exception& e) {
            rec.outcome = Outcome::Aborted;
            rec.error = e.what();
            return rec;
        }

        const double speed = (xn - x).norm() / cfg.dt;
        if (speed <= cfg.equilibrium_speed_tol &&
            xn.norm() > cfg.origin_tol) {
            ++dwell;
            dwell_sum += xn;
        } else {
            dwell = 0;
            dwell_sum.setZero();
        }
        x = xn;
    }
}

InvariantReport monitor_invariants(const TrajectoryRecord& record,
                                   const CertificateFunction& clf,
                                   const CertificateFunction& cbf) {
    InvariantReport rep;
    rep.max_clf_residual = -std::numeric_limits<double>::infinity();
    rep.min_cbf_margin = std::numeric_limits<double>::infinity();
    rep.min_h = record.min_h();

    const size_t n = record.times.size();
    for (size_t i = 0; i + 1 < n; ++i) {
        const double dt = record.times[i + 1] - record.times[i];
        if (!(dt > 0.0)) continue;
        const double dh =
            (record.h_values[i + 1] - record.h_values[i]) / dt;
        const double h_mid =
            0.5 * (record.h_values[i + 1] + record.h_values[i]);
        rep.min_cbf_margin =
            std::min(rep.min_cbf_margin, dh + cbf.class_k.eval(h_mid));
        if (record.u_bar_h[i] == 0.0) {
            const double dv =
                (record.v_values[i + 1] - record.v_values[i]) / dt;
            const double v_mid =
                0.5 * (record.v_values[i + 1] + record.v_values[i]);
            rep.max_clf_residual =
                std::max(rep.max_clf_residual, dv + clf.class_k.eval(v_mid));
            ++rep.clf_steps;
        }
    }
    return rep;
}

}  // namespace dcp
