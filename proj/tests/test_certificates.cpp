#include <cmath>

#include "doctest.h"

#include "dcp/certificate.hpp"
#include "dcp/scenario.hpp"

using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

// Relative gradient error against the central difference, floored so points
// where the gradient vanishes compare absolutely.
double grad_mismatch(const dcp::CertificateFunction& cert,
                     const Vector2d& x) {
    const VectorXd analytic = cert.gradient(x);
    const VectorXd numeric = dcp::fd_gradient(cert.value)(x);
    return (analytic - numeric).norm() / std::max(1.0, analytic.norm());
}

}  // namespace

TEST_CASE("analytic gradients match central differences on a grid") {
    const dcp::Scenario cases[] = {dcp::make_case1_scenario(),
                                   dcp::make_case2_scenario()};
    for (const dcp::Scenario& sc : cases) {
        CAPTURE(sc.name);
        for (int i = 0; i <= 20; ++i) {
            for (int j = 0; j <= 20; ++j) {
                const Vector2d x(-6.0 + 0.6 * i, -6.0 + 0.6 * j);
                REQUIRE(grad_mismatch(sc.clf, x) <= 1e-6);
                REQUIRE(grad_mismatch(sc.cbf, x) <= 1e-6);
            }
        }
    }
}

TEST_CASE("lie derivatives, pinned values") {
    const dcp::Scenario sc = dcp::make_case1_scenario();

    const dcp::LieData lv =
        dcp::lie_derivatives(sc.sys, sc.clf, Vector2d(1.0, 0.0));
    CHECK(lv.value == 3.0);
    CHECK(lv.lf == 6.0);
    CHECK(lv.lg(0) == 6.0);
    CHECK(lv.lg(1) == 0.0);
    CHECK(lv.F_term == 9.0);

    const dcp::LieData lh =
        dcp::lie_derivatives(sc.sys, sc.cbf, Vector2d(0.0, 2.0));
    CHECK(lh.value == 0.0);
    CHECK(lh.lf == -8.0);
    CHECK(lh.lg(0) == 0.0);
    CHECK(lh.lg(1) == -4.0);
    CHECK(lh.F_term == -8.0);
}

TEST_CASE("certificate signs at landmark states") {
    const dcp::Scenario c1 = dcp::make_case1_scenario();
    CHECK(c1.clf.value(Vector2d(0.0, 0.0)) == 0.0);
    CHECK(c1.cbf.value(Vector2d(0.0, 0.0)) > 0.0);
    CHECK(c1.cbf.value(Vector2d(0.0, 6.0)) == 0.0);
    CHECK(c1.cbf.value(Vector2d(0.0, 2.0)) == 0.0);
    CHECK(c1.cbf.value(Vector2d(0.0, 3.0)) < 0.0);

    const dcp::Scenario c2 = dcp::make_case2_scenario();
    CHECK(c2.clf.value(Vector2d(0.0, 0.0)) == 0.0);
    CHECK(c2.cbf.value(Vector2d(0.0, 0.0)) > 0.0);
    // lobe centers sit at squared-distance product zero
    CHECK(c2.cbf.value(Vector2d(2.0, 3.0)) < 0.0);
    CHECK(c2.cbf.value(Vector2d(-2.0, 3.0)) < 0.0);
    // the waist between the lobes is inside the obstacle too
    CHECK(c2.cbf.value(Vector2d(0.0, 3.0)) < 0.0);
}

TEST_CASE("admissible-set membership at the pinned states") {
    const dcp::Scenario sc = dcp::make_case1_scenario();

    const dcp::LieData lv =
        dcp::lie_derivatives(sc.sys, sc.clf, Vector2d(1.0, 0.0));
    CHECK(dcp::clf_admissible(lv, Vector2d(-1.5, 0.0)));
    CHECK(dcp::clf_admissible(lv, Vector2d(-2.0, 0.0)));
    CHECK_FALSE(dcp::clf_admissible(lv, Vector2d(0.0, 0.0)));

    const dcp::LieData lh =
        dcp::lie_derivatives(sc.sys, sc.cbf, Vector2d(0.0, 2.0));
    CHECK(dcp::cbf_admissible(lh, Vector2d(0.0, -2.0)));
    CHECK(dcp::cbf_admissible(lh, Vector2d(0.0, -3.0)));
    CHECK_FALSE(dcp::cbf_admissible(lh, Vector2d(0.0, 0.0)));
}

TEST_CASE("class-K constructors are increasing through zero") {
    const dcp::ClassKFunction id =
        dcp::identity_class_k(dcp::ClassKFunction::Kind::ClassK);
    CHECK(id.eval(0.0) == 0.0);
    CHECK(id.eval(2.0) == 2.0);

    const dcp::ClassKFunction lin =
        dcp::linear_class_k(2.5, dcp::ClassKFunction::Kind::Extended);
    CHECK(lin.eval(0.0) == 0.0);
    CHECK(lin.eval(4.0) == 10.0);
    CHECK(lin.eval(-4.0) == -10.0);
    double prev = lin.eval(-1.0);
    for (double s = -0.9; s <= 1.0; s += 0.1) {
        const double cur = lin.eval(s);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("system construction rejects nonvanishing drift at the origin") {
    CHECK_THROWS_AS(
        dcp::make_system(
            2, 2, 2,
            [](const VectorXd& x) -> VectorXd {
                return x + Vector2d(0.5, 0.0);
            },
            [](const VectorXd&) { return Eigen::MatrixXd::Identity(2, 2); }),
        dcp::Error);
}

TEST_CASE("factory certificates evaluate like their closed forms") {
    // h = x1^2 + (x2-4)^2 - 4 expanded into monomials
    const dcp::CertificateFunction h = dcp::polynomial_cbf(
        {{2, 0, 1.0}, {0, 2, 1.0}, {0, 1, -8.0}, {0, 0, 12.0}},
        dcp::identity_class_k(dcp::ClassKFunction::Kind::Extended));
    const dcp::Scenario sc = dcp::make_case1_scenario();
    for (double x1 : {-3.0, 0.0, 1.5}) {
        for (double x2 : {-1.0, 2.0, 6.0}) {
            const Vector2d x(x1, x2);
            CHECK(std::abs(h.value(x) - sc.cbf.value(x)) <= 1e-12);
            CHECK((h.gradient(x) - sc.cbf.gradient(x)).norm() <= 1e-12);
        }
    }

    Eigen::MatrixXd p(2, 2);
    p << 6.0, 0.0, 0.0, 1.0;
    const dcp::CertificateFunction v = dcp::quadratic_clf(
        p, dcp::identity_class_k(dcp::ClassKFunction::Kind::ClassK));
    const Vector2d x(1.0, -2.0);
    CHECK(v.value(x) == sc.clf.value(x));
    CHECK((v.gradient(x) - sc.clf.gradient(x)).norm() == 0.0);
}
