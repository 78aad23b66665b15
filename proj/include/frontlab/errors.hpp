#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

/// Base class for all frontlab-specific failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Assumption (A3) does not hold for the requested step distribution.
struct A3Violated : Error {
    explicit A3Violated(const std::string& msg) : Error(msg) {}
};

/// Bracket expansion for the t* solve exceeded its doubling budget.
struct NoBracket : Error {
    explicit NoBracket(const std::string& msg) : Error(msg) {}
};

/// Coupled step invoked on populations that are not stochastically ordered.
struct OrderViolated : Error {
    explicit OrderViolated(const std::string& msg) : Error(msg) {}
};

/// A sequence increment exceeded the stated bound K.
struct StepBoundViolated : Error {
    explicit StepBoundViolated(const std::string& msg) : Error(msg) {}
};

/// Trajectory was run without the instrumentation a check requires.
struct MissingStepLog : Error {
    explicit MissingStepLog(const std::string& msg) : Error(msg) {}
};

/// Operation restricted to lattice (Bernoulli) step laws.
struct UnsupportedDistribution : Error {
    explicit UnsupportedDistribution(const std::string& msg) : Error(msg) {}
};

/// Galton-Watson helper needs a supercritical offspring law.
struct SubcriticalOffspring : Error {
    explicit SubcriticalOffspring(const std::string& msg) : Error(msg) {}
};

/// Fit invoked with too few data points.
struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

/// Fit invoked with a gap that is zero or negative (v_point >= v_inf).
struct NonPositiveGap : Error {
    explicit NonPositiveGap(const std::string& msg) : Error(msg) {}
};

/// Bad distribution parameters or malformed distribution spec string.
struct InvalidDistribution : Error {
    explicit InvalidDistribution(const std::string& msg) : Error(msg) {}
};

}  // namespace frontlab
