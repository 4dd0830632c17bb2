#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tbn {

// Root of every error thrown by the library. The CLI maps subclasses onto
// exit codes, so new error kinds should derive from the closest category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad hyperparameters or incomplete weight maps.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Datasets whose columns do not line up with a network or metadata file.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Ordering violations and malformed CPT-trees.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied values that are contradictory or out of range.
class InputError : public Error {
 public:
  using Error::Error;
};

// An SDD handle used with a manager that did not create it.
class OwnershipError : public Error {
 public:
  using Error::Error;
};

// Split statistics that do not partition the parent's counts.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class TractabilityBoundError : public Error {
 public:
  TractabilityBoundError(std::size_t partial_size, std::size_t bound)
      : Error("compiled size " + std::to_string(partial_size) +
              " exceeds the maximum of " + std::to_string(bound)),
        partial_size_(partial_size),
        bound_(bound) {}

  std::size_t partial_size() const noexcept { return partial_size_; }
  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t partial_size_;
  std::size_t bound_;
};

// Conditioning on evidence that has zero probability under the model.
class UndefinedConditionalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tbn
