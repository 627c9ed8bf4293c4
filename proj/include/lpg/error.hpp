#pragma once

#include <stdexcept>
#include <string>

namespace lpg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad parameter, mismatched grids, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested computation is not supported on this operator/backend combination.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Raised by the experiment configuration layer; maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpg
