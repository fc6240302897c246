#pragma once

#include <stdexcept>
#include <string>

namespace dpca {

// Base class for every error this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

class NotOrthonormalError : public Error {
 public:
  using Error::Error;
};

class NotProjectionError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class InvalidKError : public Error {
 public:
  using Error::Error;
};

class DegenerateDatasetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpca
