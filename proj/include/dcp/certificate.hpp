#pragma once

#include <Eigen/Dense>
#include <functional>

#include "dcp/class_k.hpp"
#include "dcp/system.hpp"

namespace dcp {

// A certificate is a scalar function with gradient and an attached class-K
// rate.  Clf kind: positive definite, value(0) = 0, paired with the decrease
// condition Vdot <= -alpha(V).  Cbf kind: the safe set is {h >= 0}, paired
// with hdot >= -alpha(h).
struct CertificateFunction {
    enum class Kind { Clf, Cbf };

    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    ClassKFunction class_k;
    Kind kind = Kind::Clf;
};

// Central finite-difference gradient for certificates supplied without an
// analytic one.  Step 1e-5.
inline std::function<Eigen::VectorXd(const Eigen::VectorXd&)>
fd_gradient(std::function<double(const Eigen::VectorXd&)> value) {
    return [value = std::move(value)](const Eigen::VectorXd& x) {
        constexpr double step = 1e-5;
        Eigen::VectorXd g(x.size());
        Eigen::VectorXd p = x;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            p(i) = x(i) + step;
            const double up = value(p);
            p(i) = x(i) - step;
            const double dn = value(p);
            p(i) = x(i);
            g(i) = (up - dn) / (2.0 * step);
        }
        return g;
    };
}

// Lie derivatives of one certificate along the control-affine dynamics,
// together with the decrease/barrier offset
//   F_term = lf + class_k(value(x)).
struct LieData {
    double lf = 0.0;             // grad . f
    Eigen::RowVectorXd lg;       // grad' G, one entry per input channel
    double value = 0.0;          // certificate value at x
    double F_term = 0.0;
};

inline LieData lie_derivatives(const ControlAffineSystem& sys,
                               const CertificateFunction& cert,
                               const Eigen::VectorXd& x) {
    LieData out;
    const Eigen::VectorXd grad = cert.gradient(x);
    out.lf = grad.dot(sys.drift(x));
    out.lg = grad.transpose() * sys.input_matrix(x);
    out.value = cert.value(x);
    out.F_term = out.lf + cert.class_k.eval(out.value);
    return out;
}

// Membership in the stabilizing input set: F_l + L_GV u <= 0 (slack 1e-10).
inline bool clf_admissible(const LieData& lie, const Eigen::VectorXd& u) {
    return lie.F_term + lie.lg.dot(u) <= 1e-10;
}

// Membership in the safe input set: F_h + L_Gh u >= 0 (slack 1e-10).
inline bool cbf_admissible(const LieData& lie, const Eigen::VectorXd& u) {
    return lie.F_term + lie.lg.dot(u) >= -1e-10;
}

}  // namespace dcp
