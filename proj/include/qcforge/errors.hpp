#pragma once

#include <stdexcept>
#include <string>

namespace qcforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-positive determinant where an orientation-preserving map is required.
struct OrientationError : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Degenerate triangle or other malformed geometry.
struct GeometryError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

/// Requested depth would materialize more data than the configured guard allows.
struct DepthGuardError : Error {
    using Error::Error;
};

struct DegenerateFitError : Error {
    using Error::Error;
};

}  // namespace qcforge
