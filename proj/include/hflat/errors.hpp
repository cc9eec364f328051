#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hflat {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or name error in an expression or spec file, with a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Division by zero or a branch-cut hit while evaluating jets.
class JetError : public Error {
 public:
  using Error::Error;
};

/// A JetError raised while evaluating an expression, tagged with the subtree offset.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, std::size_t offset)
      : Error(what + " (subexpression at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularCoframeError : public Error {
 public:
  using Error::Error;
};

/// The (0,2) part of d(phi) does not vanish: the coframe does not define an integrable structure.
class IntegrabilityError : public Error {
 public:
  IntegrabilityError(const std::string& what, double magnitude) : Error(what), magnitude_(magnitude) {}
  double magnitude() const { return magnitude_; }

 private:
  double magnitude_;
};

class ApplicabilityError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace hflat
