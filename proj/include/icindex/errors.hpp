#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace icindex {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input row. `line()` is 1-based and counts the header.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Missing or unusable header columns.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class DuplicatePair : public Error {
 public:
  DuplicatePair(std::string drug, std::string target)
      : Error("duplicate (drug, target) pair (" + drug + ", " + target + ")"),
        drug_(std::move(drug)),
        target_(std::move(target)) {}
  const std::string& drug() const noexcept { return drug_; }
  const std::string& target() const noexcept { return target_; }

 private:
  std::string drug_;
  std::string target_;
};

/// Non-finite number handed to a numeric routine.
class InvalidValue : public Error {
 public:
  using Error::Error;
};

/// Predictions and records disagree in length or identity.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

/// Not enough drugs or targets to form the requested groups.
class InsufficientEntities : public Error {
 public:
  using Error::Error;
};

}  // namespace icindex
