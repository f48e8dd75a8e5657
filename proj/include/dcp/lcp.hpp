#pragma once

#include "dcp/errors.hpp"

namespace dcp {

// Threshold below which a quantity that must be strictly positive is treated
// as zero when selecting a complementarity case.
inline constexpr double strict_positive_tol = 1e-12;

// Data of the lower-triangular 2x2 linear complementarity problem
//
//   find z >= 0  with  A z + q >= 0,  z' (A z + q) = 0,
//   A = [a 0; c d],  q = [q1; q2].
//
// The (1,2) entry of A is structurally zero and never stored.  Instances are
// valid iff (a > 0 and d > 0) or (a = 0 and d > 0 and q1 > 0); the
// constructor rejects everything else, so a constructed object is solvable.
struct TriangularLcp {
    double a;
    double c;
    double d;
    double q1;
    double q2;

    TriangularLcp(double a, double c, double d, double q1, double q2);
};

// Solution pair, z1 >= 0 and z2 >= 0, with complementarity residual
// |z1 (a z1 + q1)| + |z2 (c z1 + d z2 + q2)| <= 1e-10 for valid inputs.
struct LcpSolution {
    double z1;
    double z2;
};

// Unique solution t = max(-b_tilde, 0) / a_tilde of the scalar problem
// t >= 0, a_tilde t + b_tilde >= 0, t (a_tilde t + b_tilde) = 0.
// Requires a_tilde > 0.
double solve_scalar_lcp(double a_tilde, double b_tilde);

// Closed form: z1 = max(-q1, 0)/a (z1 = 0 in the a = 0 case), then
// z2 = max(-c z1 - q2, 0)/d.  Unique and locally Lipschitz in (q1, q2).
LcpSolution solve_triangular_lcp(const TriangularLcp& p);

// Verification oracle: enumerates the four active sets
// {z1 in {0, free}} x {z2 in {0, free}}, solves each, and returns the
// pattern satisfying z >= 0, A z + q >= 0, and complementarity.  Ties between
// patterns that agree within 1e-10 resolve to the smaller ||z||; feasible
// patterns that disagree beyond that signal a non-P matrix and raise
// OracleFailure.
LcpSolution brute_force_lcp(const TriangularLcp& p);

}  // namespace dcp
