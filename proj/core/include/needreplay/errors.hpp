#ifndef NEEDREPLAY_ERRORS_HPP
#define NEEDREPLAY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace needreplay {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition stated on an operation was not met (e.g. negative priority).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class EmptyQueueError : public Error {
 public:
  EmptyQueueError() : Error("priority queue is empty") {}
};

class RangeError : public Error {
 public:
  using Error::Error;
};

/// Sampling was requested from a structure whose total mass is zero.
class NoMassError : public Error {
 public:
  NoMassError() : Error("sampler has zero total mass") {}
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Projection onto a zero-norm feature vector.
class DegenerateFeatureError : public Error {
 public:
  DegenerateFeatureError() : Error("target feature vector has zero norm") {}
};

class UnreachableError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input such as a maze grid file.
class ParseError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; `field()` names the offending key.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error("invalid config field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_ERRORS_HPP
