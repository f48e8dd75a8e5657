#pragma once

#include <functional>

namespace dcp {

// Strictly increasing scalar map with eval(0) = 0.  ClassK is only consulted
// on arguments >= 0; Extended must also be defined and increasing on
// negative arguments (the barrier condition evaluates it below zero).
struct ClassKFunction {
    enum class Kind { ClassK, Extended };

    std::function<double(double)> eval;
    Kind kind = Kind::ClassK;
};

inline ClassKFunction identity_class_k(ClassKFunction::Kind kind) {
    return {[](double s) { return s; }, kind};
}

// lambda * s with lambda > 0.
inline ClassKFunction linear_class_k(double lambda, ClassKFunction::Kind kind) {
    return {[lambda](double s) { return lambda * s; }, kind};
}

}  // namespace dcp
