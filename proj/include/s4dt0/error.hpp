/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace s4dt0 {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `offset` is the byte position of the problem.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A character sequence that is not a token of the formula grammar.
class UnknownToken : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotPreorder : public Error {
 public:
  using Error::Error;
};

class NotS4DCone : public Error {
 public:
  using Error::Error;
};

class NotS4DT0Cone : public Error {
 public:
  using Error::Error;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace s4dt0
