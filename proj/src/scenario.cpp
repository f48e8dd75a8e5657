#include "dcp/scenario.hpp"

#include <cmath>
#include <utility>

namespace dcp {

namespace {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

// Both published scenarios share xdot = x + u on the box [-10,10]^2.
ControlAffineSystem integrator_drift_system() {
    return make_system(
        2, 2, 2, [](const VectorXd& x) { return x; },
        [](const VectorXd&) { return MatrixXd::Identity(2, 2); });
}

std::vector<VectorXd> to_states(std::initializer_list<Vector2d> pts) {
    std::vector<VectorXd> out;
    for (const Vector2d& p : pts) out.push_back(p);
    return out;
}

}  // namespace

Scenario make_case1_scenario() {
    Scenario sc;
    sc.name = "case1";
    sc.sys = integrator_drift_system();

    sc.clf.kind = CertificateFunction::Kind::Clf;
    sc.clf.value = [](const VectorXd& x) {
        return 0.5 * (6.0 * x(0) * x(0) + x(1) * x(1));
    };
    sc.clf.gradient = [](const VectorXd& x) {
        return Vector2d(6.0 * x(0), x(1));
    };
    sc.clf.class_k = identity_class_k(ClassKFunction::Kind::ClassK);

    sc.cbf.kind = CertificateFunction::Kind::Cbf;
    sc.cbf.value = [](const VectorXd& x) {
        return x(0) * x(0) + (x(1) - 4.0) * (x(1) - 4.0) - 4.0;
    };
    sc.cbf.gradient = [](const VectorXd& x) {
        return Vector2d(2.0 * x(0), 2.0 * (x(1) - 4.0));
    };
    sc.cbf.class_k = identity_class_k(ClassKFunction::Kind::Extended);

    sc.domain_min = Vector2d(-10.0, -10.0);
    sc.domain_max = Vector2d(10.0, 10.0);
    sc.default_inits = to_states({{0.0, 7.0},
                                  {2.0, 7.0},
                                  {-2.0, 7.0},
                                  {1.0, 6.0},
                                  {-1.0, 6.0},
                                  {3.0, 5.0},
                                  {-3.0, 5.0}});
    sc.boundary_seeds = to_states({{0.0, 4.0}});
    sc.default_k = 15.0;
    return sc;
}

Scenario make_case2_scenario() {
    Scenario sc;
    sc.name = "case2";
    sc.sys = integrator_drift_system();

    sc.clf.kind = CertificateFunction::Kind::Clf;
    sc.clf.value = [](const VectorXd& x) { return 0.5 * x.squaredNorm(); };
    sc.clf.gradient = [](const VectorXd& x) -> VectorXd { return x; };
    sc.clf.class_k = identity_class_k(ClassKFunction::Kind::ClassK);

    // h = A B - 2.1^4 with A, B the squared distances to (2,3) and (-2,3);
    // the zero level set is a peanut around both lobes, pinched at (0, y)
    // where (4 + (y-3)^2)^2 = 2.1^4.
    constexpr double radius4 = 2.1 * 2.1 * 2.1 * 2.1;
    sc.cbf.kind = CertificateFunction::Kind::Cbf;
    sc.cbf.value = [](const VectorXd& x) {
        const double a = (x(0) - 2.0) * (x(0) - 2.0) +
                         (x(1) - 3.0) * (x(1) - 3.0);
        const double b = (x(0) + 2.0) * (x(0) + 2.0) +
                         (x(1) - 3.0) * (x(1) - 3.0);
        return a * b - radius4;
    };
    sc.cbf.gradient = [](const VectorXd& x) {
        const double a = (x(0) - 2.0) * (x(0) - 2.0) +
                         (x(1) - 3.0) * (x(1) - 3.0);
        const double b = (x(0) + 2.0) * (x(0) + 2.0) +
                         (x(1) - 3.0) * (x(1) - 3.0);
        return Vector2d(2.0 * (x(0) - 2.0) * b + 2.0 * (x(0) + 2.0) * a,
                        2.0 * (x(1) - 3.0) * (a + b));
    };
    sc.cbf.class_k = identity_class_k(ClassKFunction::Kind::Extended);

    sc.domain_min = Vector2d(-10.0, -10.0);
    sc.domain_max = Vector2d(10.0, 10.0);
    sc.default_inits = to_states({{0.5, 4.0}, {-0.5, 4.0}, {0.0, 5.3}});
    sc.boundary_seeds = to_states({{2.0, 3.0}, {-2.0, 3.0}});
    sc.default_k = 20.0;
    return sc;
}

CertificateFunction polynomial_cbf(std::vector<PolyTerm> terms,
                                   ClassKFunction alpha) {
    auto value = [terms](const VectorXd& x) {
        double v = 0.0;
        for (const PolyTerm& t : terms) {
            v += t.coef * std::pow(x(0), t.i) * std::pow(x(1), t.j);
        }
        return v;
    };
    auto gradient = [terms](const VectorXd& x) {
        Vector2d g(0.0, 0.0);
        for (const PolyTerm& t : terms) {
            if (t.i > 0) {
                g(0) += t.coef * t.i * std::pow(x(0), t.i - 1) *
                        std::pow(x(1), t.j);
            }
            if (t.j > 0) {
                g(1) += t.coef * t.j * std::pow(x(0), t.i) *
                        std::pow(x(1), t.j - 1);
            }
        }
        return g;
    };
    CertificateFunction cert;
    cert.kind = CertificateFunction::Kind::Cbf;
    cert.value = std::move(value);
    cert.gradient = std::move(gradient);
    cert.class_k = std::move(alpha);
    return cert;
}

CertificateFunction quadratic_clf(MatrixXd p, ClassKFunction alpha) {
    CertificateFunction cert;
    cert.kind = CertificateFunction::Kind::Clf;
    cert.value = [p](const VectorXd& x) { return 0.5 * x.dot(p * x); };
    // 1/2 (P + P') x, so an unsymmetrized input still yields the exact
    // gradient of the quadratic form.
    cert.gradient = [p](const VectorXd& x) -> VectorXd {
        return 0.5 * (p + p.transpose()) * x;
    };
    cert.class_k = std::move(alpha);
    return cert;
}

}  // namespace dcp
