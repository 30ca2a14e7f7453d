/**
 * @file error.hpp
 * @brief Exception types shared by every steff2d module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace steff2d {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: bad rectangle, dimension mismatch, invalid generator, ...
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A function was evaluated outside its mathematical domain (NaN or infinite result).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical procedure hit its refinement limit.
class NonConvergence : public Error {
public:
    using Error::Error;
};

} // namespace steff2d
