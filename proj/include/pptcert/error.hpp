#pragma once

#include <stdexcept>
#include <string>

namespace pptcert {

/// Malformed input: bad config, invalid model parameters, mismatched dimensions.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A proved inequality or a consistency contract failed beyond tolerance.
class PropertyViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigensolver failure, non-finite values, series that cannot be truncated.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pptcert
