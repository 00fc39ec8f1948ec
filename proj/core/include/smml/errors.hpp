#pragma once

#include <stdexcept>
#include <string>

namespace smml {

/// A model parameter lies outside the range where the model is defined.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value lies outside the domain of the function it was passed to
/// (outside the data support, outside the image of the mean map, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed arguments: unordered cut-points, empty intervals, bad counts.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace smml
