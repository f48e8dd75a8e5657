#include "dcp/lcp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

namespace dcp {

namespace {

// Row residuals A z + q of the full 2x2 problem.
double row1(const TriangularLcp& p, double z1) { return p.a * z1 + p.q1; }
double row2(const TriangularLcp& p, double z1, double z2) {
    return p.c * z1 + p.d * z2 + p.q2;
}

#ifndef NDEBUG
void check_solution(const TriangularLcp& p, const LcpSolution& s) {
    assert(s.z1 >= 0.0 && s.z2 >= 0.0);
    assert(row1(p, s.z1) >= -1e-12);
    assert(row2(p, s.z1, s.z2) >= -1e-12);
    const double comp = std::abs(s.z1 * row1(p, s.z1)) +
                        std::abs(s.z2 * row2(p, s.z1, s.z2));
    assert(comp <= 1e-10);
}
#endif

}  // namespace

TriangularLcp::TriangularLcp(double a, double c, double d, double q1, double q2)
    : a(a), c(c), d(d), q1(q1), q2(q2) {
    if (!(d > strict_positive_tol)) {
        throw LcpValidityError(
            "triangular LCP requires d > 0, got d = " + std::to_string(d));
    }
    if (a > strict_positive_tol) {
        return;  // case i: a > 0, d > 0
    }
    if (a < 0.0) {
        throw LcpValidityError(
            "triangular LCP requires a >= 0, got a = " + std::to_string(a));
    }
    // case ii: a = 0 admits a solution only when the first row is already
    // strictly feasible at z1 = 0.
    if (!(q1 > strict_positive_tol)) {
        throw LcpValidityError(
            "triangular LCP with a = 0 requires q1 > 0, got q1 = " +
            std::to_string(q1));
    }
}

double solve_scalar_lcp(double a_tilde, double b_tilde) {
    if (!(a_tilde > 0.0)) {
        throw std::invalid_argument(
            "scalar LCP closed form requires a_tilde > 0, got " +
            std::to_string(a_tilde));
    }
    return std::max(-b_tilde, 0.0) / a_tilde;
}

LcpSolution solve_triangular_lcp(const TriangularLcp& p) {
    // z1 first: the top row decouples.  In the a = 0 case q1 > 0 forces
    // z1 = 0 by complementarity.
    const double z1 =
        p.a > strict_positive_tol ? std::max(-p.q1, 0.0) / p.a : 0.0;
    const double z2 = std::max(-p.c * z1 - p.q2, 0.0) / p.d;
    const LcpSolution s{z1, z2};
#ifndef NDEBUG
    check_solution(p, s);
#endif
    return s;
}

LcpSolution brute_force_lcp(const TriangularLcp& p) {
    // Feasibility slack for the enumerated candidates; forming z from q
    // divides by a or d, so residuals stay far below this for the magnitudes
    // the controller produces.
    constexpr double feas_tol = 1e-9;
    const bool a_invertible = std::abs(p.a) > strict_positive_tol;

    std::vector<LcpSolution> feasible;
    auto admit = [&](double z1, double z2) {
        if (z1 < -feas_tol || z2 < -feas_tol) return;
        z1 = std::max(z1, 0.0);
        z2 = std::max(z2, 0.0);
        if (row1(p, z1) < -feas_tol) return;
        if (row2(p, z1, z2) < -feas_tol) return;
        // Active rows were solved to zero and inactive variables are zero,
        // so complementarity holds by construction.
        feasible.push_back({z1, z2});
    };

    // (z1, z2) = (0, 0)
    admit(0.0, 0.0);
    // z1 active, z2 = 0
    if (a_invertible) admit(-p.q1 / p.a, 0.0);
    // z1 = 0, z2 active
    admit(0.0, -p.q2 / p.d);
    // both active
    if (a_invertible) {
        const double z1 = -p.q1 / p.a;
        admit(z1, (-p.c * z1 - p.q2) / p.d);
    }

    if (feasible.empty()) {
        throw OracleFailure("no feasible active-set pattern");
    }
    // Prefer the smaller ||z|| so degenerate boundaries (q1 = 0 or an exactly
    // tight row) resolve the same way the closed form does.
    auto norm2 = [](const LcpSolution& s) {
        return s.z1 * s.z1 + s.z2 * s.z2;
    };
    std::sort(feasible.begin(), feasible.end(),
              [&](const LcpSolution& l, const LcpSolution& r) {
                  return norm2(l) < norm2(r);
              });
    for (const LcpSolution& s : feasible) {
        if (std::abs(s.z1 - feasible.front().z1) > 1e-10 ||
            std::abs(s.z2 - feasible.front().z2) > 1e-10) {
            throw OracleFailure(
                "multiple distinct feasible patterns; matrix is not P");
        }
    }
    return feasible.front();
}

}  // namespace dcp
