#pragma once

#include <stdexcept>
#include <string>

namespace allmod {

/// Base class for every recoverable domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidModulusError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

class InfeasibleGeometryError : public Error {
public:
    using Error::Error;
};

/// A cost table has no entry for the requested width.
class CalibrationRequiredError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

/// Raised when an engine-internal bound is violated. Always indicates a bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {
inline void check_invariant(bool ok, const char* what) {
    if (!ok) throw InvariantError(what);
}
}  // namespace detail

}  // namespace allmod
