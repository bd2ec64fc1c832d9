#pragma once

#include <stdexcept>
#include <string>

namespace melonlab {

// Base for every failure the library reports. The CLI maps these to exit
// code 1, except ConfigError which is a usage problem (exit 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to an operation (n = 0, p outside (0,1), k > n, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The requested optimization has no feasible solution.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// A configured guard (size limits, k <= c1 n, construction geometry) refused
// the request. The message names the inequality that failed.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent serialized input.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Unknown key or unparsable value in an experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Internal consistency failure; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace melonlab
