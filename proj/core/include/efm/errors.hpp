#pragma once

#include <stdexcept>
#include <string>

namespace efm {

// Bad inputs, malformed files, out-of-range parameters. CLI exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver or alignment failures. CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RangeTooLarge : ValidationError {
    using ValidationError::ValidationError;
};
struct MagicMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct DimMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct NonFiniteValue : ValidationError {
    using ValidationError::ValidationError;
};
struct MissingDay : ValidationError {
    using ValidationError::ValidationError;
};
struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};
struct GridMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct InvalidWarp : ValidationError {
    using ValidationError::ValidationError;
};
struct NonInvertible : NumericalError {
    using NumericalError::NumericalError;
};
struct EmptyKernelSupport : ValidationError {
    using ValidationError::ValidationError;
};
struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace efm
