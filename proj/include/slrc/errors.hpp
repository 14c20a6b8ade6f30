#pragma once

#include <stdexcept>
#include <string>

namespace slrc {

/// Invalid arguments, out-of-range options, malformed files. CLI exit code 1.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of the numerics themselves. CLI exit code 2.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergenceError : NumericError {
    long step = -1;
    DivergenceError(const std::string& msg, long step_index)
        : NumericError(msg), step(step_index) {}
};

struct SingularityError : NumericError {
    using NumericError::NumericError;
};

struct ConvergenceError : NumericError {
    double best_estimate = 0.0;
    ConvergenceError(const std::string& msg, double best)
        : NumericError(msg), best_estimate(best) {}
};

struct ShapeError : NumericError {
    using NumericError::NumericError;
};

struct DegenerateMatrixError : NumericError {
    using NumericError::NumericError;
};

struct StabilityError : NumericError {
    using NumericError::NumericError;
};

}  // namespace slrc
