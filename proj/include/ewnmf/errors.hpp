#ifndef EWNMF_ERRORS_HPP
#define EWNMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ewnmf {

// Shape disagreement between matrix operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation (negative data for a
// KL term, alpha in {0,1}, non-positive gamma, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A structural constraint was violated (e.g. a weight column not summing to 1).
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid run configuration (bad rank, unknown config key, missing labels).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation produced a non-finite value.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ewnmf

#endif
