#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace robustik {

enum class ErrorKind {
  NonSymmetric,
  NonFinite,
  NotPositiveDefinite,
  RankDeficient,
  DimensionMismatch,
  LengthMismatch,
  NonUnitDirection,
  NonOrthonormalBasis,
  Parse,
  Validation,
  EmptyIKSet,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind lets
/// callers branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Robot-spec document could not be parsed. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string field, std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse, format(field, line, what)),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, std::size_t line,
                            const std::string& what) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + what;
  }

  std::string field_;
  std::size_t line_;
};

}  // namespace robustik
