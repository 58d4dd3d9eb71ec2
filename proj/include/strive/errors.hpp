#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strive {

// Root of every error thrown by the library. Callers that do not care about
// the category can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fewer than two samples in an advantage group.
class InvalidGroupError : public Error {
 public:
  using Error::Error;
};

// NaN/inf inputs, non-positive probability ratios and similar value faults.
class InvalidValueError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class BudgetInfeasibleError : public Error {
 public:
  using Error::Error;
};

class InvalidTemperatureError : public Error {
 public:
  using Error::Error;
};

class InvalidSegmentError : public Error {
 public:
  using Error::Error;
};

// Raised by apply_update when the gradient carries non-finite entries; the
// harness skips the step and logs it.
class UpdateRejectedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ParseErrorKind { bad_magic, version_mismatch, truncated, dimension_inconsistent, io };

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& message)
      : Error(message + " (at byte offset " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

}  // namespace strive
