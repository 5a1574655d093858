#pragma once

#include <stdexcept>
#include <string>

namespace qhosvd {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand dimensions do not conform.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Mode or slice index outside the tensor's range.
class ModeError : public Error {
public:
    using Error::Error;
};

// Argument outside the function's domain (e.g. inverse of zero).
class DomainError : public Error {
public:
    using Error::Error;
};

// Non-finite or otherwise unusable input data.
class DataError : public Error {
public:
    using Error::Error;
};

// Invalid truncation ranks or ratios.
class SpecError : public Error {
public:
    using Error::Error;
};

// A decomposition object is missing state an operation depends on.
class InternalStateError : public Error {
public:
    using Error::Error;
};

// A file or stream could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed serialized tensor.
class ParseError : public DataError {
public:
    enum class Kind { bad_magic, truncated, zero_order, dimension_overflow, bad_header };

    ParseError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}
    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    // Largest relative off-diagonal coupling left when the sweep cap was hit.
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace qhosvd
