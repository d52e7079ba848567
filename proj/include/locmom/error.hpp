#pragma once

#include <stdexcept>
#include <string>

namespace locmom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad grid parameters, unparsable recipe text, wrong
/// variant passed to an operation. The CLI maps this to exit code 2.
class InvalidArgument : public Error {
 public:
  InvalidArgument(const std::string& field, const std::string& what)
      : Error(what), field_(field) {}
  explicit InvalidArgument(const std::string& what) : Error(what) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Well-formed input that fails a numerical precondition (state does not
/// fit the window, no support, stability guard). CLI exit code 3.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree did not. Signals an implementation
/// inconsistency rather than bad data. CLI exit code 4.
class SelfCheckError : public Error {
 public:
  using Error::Error;
};

}  // namespace locmom
