#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netelast {

// Bad input: malformed files, out-of-range indices, violated preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A solve or decomposition that cannot proceed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularSystemError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A split candidate whose partition is not unique (repeated top eigenvalue
// or a dart perpendicular to the split direction).
class NonGenericError : public NumericalError {
public:
    NonGenericError(const std::string& what, std::size_t vertex)
        : NumericalError(what), vertex_(vertex) {}
    [[nodiscard]] std::size_t vertex() const { return vertex_; }

private:
    std::size_t vertex_;
};

class MoveCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace netelast
