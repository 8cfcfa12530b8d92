// errors.hpp - exception types shared by every medent module

#pragma once

#include <stdexcept>
#include <string>

namespace medent {

/// Operand shapes or subsystem layouts that do not fit together.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Inputs that violate a documented precondition (non-Hermitian matrix,
/// non-normalized state, bad grid, ...).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested object larger than the configured maximum dimension.
class ResourceLimitError : public std::length_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::length_error(what) {}
};

/// Iterative numerics that failed to converge or produced an inconsistent result.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace medent
