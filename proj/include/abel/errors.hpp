#pragma once

#include <stdexcept>
#include <string>

namespace abel {

/// Malformed or unreadable input file. Messages carry the offending line.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quadrature produced or encountered a non-finite value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace abel
