#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dcp/certificate.hpp"
#include "dcp/system.hpp"

namespace dcp {

// A complete planar test problem: dynamics, CLF, CBF, the axis-aligned
// simulation domain, and the experiment defaults attached to it.
struct Scenario {
    std::string name;
    ControlAffineSystem sys;
    CertificateFunction clf;
    CertificateFunction cbf;
    Eigen::VectorXd domain_min;
    Eigen::VectorXd domain_max;
    // Initial conditions used when a run does not list its own.
    std::vector<Eigen::VectorXd> default_inits;
    // Interior points of the unsafe region, one per connected obstacle;
    // boundary sampling casts rays from these.
    std::vector<Eigen::VectorXd> boundary_seeds;
    // Null-space gain that reaches the origin from the default inits.
    double default_k = 0.0;
};

// Single circular obstacle of radius 2 at (0,4) with an elliptic CLF that
// weights x1 six times harder than x2; the mismatch parks QP-filtered flows
// on top of the obstacle.
Scenario make_case1_scenario();

// Product-of-circles obstacle (two lobes at (+-2,3) fused at the waist) with
// the round CLF 1/2 ||x||^2.
Scenario make_case2_scenario();

// One term coef * x1^i * x2^j of a bivariate polynomial.
struct PolyTerm {
    int i = 0;
    int j = 0;
    double coef = 0.0;
};

// Barrier built from a sparse bivariate polynomial, analytic gradient.
CertificateFunction polynomial_cbf(std::vector<PolyTerm> terms,
                                   ClassKFunction alpha);

// CLF of the quadratic form 1/2 x' P x (P symmetric positive definite is the
// caller's responsibility; positive-definiteness is spot-checked).
CertificateFunction quadratic_clf(Eigen::MatrixXd p, ClassKFunction alpha);

}  // namespace dcp
