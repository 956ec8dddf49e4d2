#pragma once

#include <stdexcept>
#include <string>

namespace mcn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
 public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid configuration (CLI exit status 2).
class ConfigError : public Error
{
 public:
    using Error::Error;
};

/// An analysis precondition does not hold (no routing path, degenerate weights, ...).
class AnalysisError : public Error
{
 public:
    using Error::Error;
};

/// Two routes that must agree by construction disagreed (CLI exit status 3).
class InternalInconsistency : public Error
{
 public:
    using Error::Error;
};

}  // namespace mcn
