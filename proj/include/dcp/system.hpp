#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "dcp/errors.hpp"

namespace dcp {

// Control-affine dynamics xdot = f(x) + G(x) u with f(0) = 0.
struct ControlAffineSystem {
    int state_dim = 0;
    int input_dim = 0;
    // Minimum rank of G over the domain, declared by the constructor of the
    // scenario.  The null-space direction construction needs >= 2.
    int declared_rank = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> input_matrix;
};

// Validates f(0) = 0 (within 1e-12) and the declared shapes at the origin.
inline ControlAffineSystem make_system(
    int state_dim, int input_dim, int declared_rank,
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift,
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> input_matrix) {
    ControlAffineSystem sys{state_dim, input_dim, declared_rank,
                            std::move(drift), std::move(input_matrix)};
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(state_dim);
    const Eigen::VectorXd f0 = sys.drift(origin);
    if (f0.size() != state_dim) {
        throw Error("drift dimension " + std::to_string(f0.size()) +
                    " does not match state_dim " + std::to_string(state_dim));
    }
    if (f0.lpNorm<Eigen::Infinity>() > 1e-12) {
        throw Error("drift must vanish at the origin, got |f(0)| = " +
                    std::to_string(f0.norm()));
    }
    const Eigen::MatrixXd g0 = sys.input_matrix(origin);
    if (g0.rows() != state_dim || g0.cols() != input_dim) {
        throw Error("input matrix shape mismatch at the origin");
    }
    return sys;
}

}  // namespace dcp
