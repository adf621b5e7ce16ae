#pragma once

#include <stdexcept>
#include <string>

namespace scholimetric {

/// Base class for every error raised by the library. The CLI maps any
/// `Error` to exit code 2 with an `error:` prefixed message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. The message names file, line and field.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& field, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": field '" + field + "': " + what),
        source_(source),
        line_(line),
        field_(field) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string field_;
};

class DuplicateIdError : public Error {
 public:
  DuplicateIdError(const std::string& kind, const std::string& id)
      : Error("duplicate " + kind + " identifier \"" + id + "\""), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class UnknownIdError : public Error {
 public:
  UnknownIdError(const std::string& kind, const std::string& id)
      : Error("unknown " + kind + " \"" + id + "\""), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// A benchmark table has no row for a year that the caller needs.
class MissingYearError : public Error {
 public:
  explicit MissingYearError(int year)
      : Error("benchmark has no entry for publication year " + std::to_string(year)), year_(year) {}
  int year() const noexcept { return year_; }

 private:
  int year_;
};

/// Arguments outside an operation's domain (negative RCI, empty input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace scholimetric
