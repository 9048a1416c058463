#pragma once

#include <stdexcept>
#include <string>

namespace halfder {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

/// Operation not defined for the selected algebra variant.
class UnsupportedVariant : public Error {
 public:
  using Error::Error;
};

class InvalidInterior : public Error {
 public:
  using Error::Error;
};

class InvalidShift : public Error {
 public:
  using Error::Error;
};

class InvalidCenterVector : public Error {
 public:
  using Error::Error;
};

/// Bad user input (flags, JSON, scalar literals). The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace halfder
