// error.hpp
// Exception types shared by every wyskew module.

#pragma once

#include <stdexcept>
#include <string>

namespace wyskew {

// Input that violates an operation's precondition (bad dimension, non-Hermitian
// matrix, negative eigenvalue, out-of-range parameter, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical self-check failed: two routes that must agree did not, or a
// residual exceeded its bound.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wyskew
