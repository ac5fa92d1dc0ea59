#pragma once

#include <stdexcept>
#include <string>

namespace vsg {

/// Base class for all analysis failures (as opposed to bad configuration).
struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The droop quadratic has no real root for the requested angle.
struct NoRealRoot : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// Both roots of the droop quadratic are non-positive.
struct NonPositiveRoot : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// The vector field produced a non-finite derivative during integration.
struct NonFiniteState : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// A grid state has no equilibrium where one is required.
struct NoEquilibrium : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// The anchor equilibrium classified as degenerate (saddle-node coalescence).
struct DegenerateUep : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// The pre-fault grid has no stable equilibrium to start a scenario from.
struct NoPreFaultSep : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// The fault-on trajectory never meets the boundary (clearing is never needed).
struct NoIntersection : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// No clearing angle satisfies the area balance.
struct NoSolution : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// Every probed clearing angle leads to a stable outcome.
struct AllStable : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// Every probed clearing angle leads to an unstable outcome.
struct AllUnstable : AnalysisError {
    using AnalysisError::AnalysisError;
};

/// Bad user input (config file, CLI arguments). Maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vsg
