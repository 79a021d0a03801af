#pragma once

#include <stdexcept>
#include <string>

namespace otstruct {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised by exhaustive oracles when the instance exceeds their size guard.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Complementary slackness fails for the supplied plan and potentials.
class NotOptimal : public Error {
 public:
  using Error::Error;
};

/// The plan support contains a cycle, so leaf peeling cannot proceed.
class CyclicSupport : public Error {
 public:
  using Error::Error;
};

class EmptyPlan : public Error {
 public:
  using Error::Error;
};

class EmptyModel : public Error {
 public:
  using Error::Error;
};

class InvalidP : public Error {
 public:
  using Error::Error;
};

/// The cost exponent cannot be represented in the exact scalar field.
class UnsupportedCost : public Error {
 public:
  using Error::Error;
};

}  // namespace otstruct
