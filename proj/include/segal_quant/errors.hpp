#pragma once

#include <stdexcept>
#include <string>

namespace segal {

/// Base of every exception thrown by the library. The CLI maps these onto
/// exit code 2 (invalid input) unless noted otherwise.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid FrequencySpec (nonpositive frequency, duplicate node, ...).
class SpecError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch, index out of range, bad sample vectors.
class InputError : public Error {
public:
    using Error::Error;
};

/// Metric not symmetric or not positive definite.
class MetricError : public Error {
public:
    using Error::Error;
};

/// Symplectic form not antisymmetric or numerically degenerate.
class DegenerateFormError : public Error {
public:
    using Error::Error;
};

class NotNaturallyComplexError : public Error {
public:
    using Error::Error;
};

/// J*A is not symmetric within tolerance.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Empty metric-constraint solution space.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// No restart of the uniqueness scan converged.
class ScanFailure : public Error {
public:
    using Error::Error;
};

/// Matrix exponential overflowed.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Fock truncation exceeds the memory budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed or schema-invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace segal
