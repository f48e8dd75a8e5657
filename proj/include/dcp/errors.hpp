#pragma once

#include <stdexcept>

namespace dcp {

// Base class for every structured failure the library raises.  The CLI maps
// ConfigError to exit code 1 and every other Error subclass to exit code 2;
// std exceptions escaping a controller mean a programming bug, not bad input.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// LCP data that satisfies neither validity case of the triangular solver.
struct LcpValidityError : Error {
    using Error::Error;
};

// Active-set enumeration found no feasible pattern, or several distinct ones.
struct OracleFailure : Error {
    using Error::Error;
};

// A certificate gradient (or its Lie derivative row) vanished where a
// division by its squared norm is required.
struct DegenerateGradient : Error {
    using Error::Error;
};

// The stabilizing magnitude needs division by ||L_G V||^2 but that norm is
// numerically zero while the decrease condition is still violated.
struct ClfDegeneracy : Error {
    using Error::Error;
};

// No null-space direction with G w != 0 exists at the queried state.
struct NoWpDirection : Error {
    using Error::Error;
};

// The null-space magnitude inf ||G w_p|| degenerated during bound estimation.
struct WpDegeneracy : Error {
    using Error::Error;
};

// KKT enumeration of the penalty QP produced no feasible candidate.
struct InfeasibleQp : Error {
    using Error::Error;
};

// Boundary ray casting produced fewer points than the minimum required.
struct SamplingFailure : Error {
    using Error::Error;
};

// Config-file or command-line validation failure; message carries the line.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace dcp
