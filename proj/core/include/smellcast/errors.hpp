#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smellcast {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Input parsed but violates a structural rule (e.g. undeclared node).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Unknown node, feature or key.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Operation undefined on the given input (empty graph, single-label data...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller passed an ill-formed parameter.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Feature columns or pair sets disagree between two artifacts.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable numeric data.
class DataError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Pipeline configuration is incomplete or inconsistent.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace smellcast
