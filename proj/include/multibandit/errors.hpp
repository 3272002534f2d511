#pragma once

#include <stdexcept>
#include <string>

namespace multibandit {

// Common base so callers can catch everything from this library at once.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An index referenced a casino or arm that does not exist.
class IndexError : public Error {
 public:
  using Error::Error;
};

// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A numeric parameter is outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Ground-truth data required for a computation is missing.
class DataError : public Error {
 public:
  using Error::Error;
};

// A casino's finite arm pool ran out; the configured pool is too small
// for the requested budget.
class PoolExhausted : public Error {
 public:
  using Error::Error;
};

// An allocator operation was attempted on a state with no tasks.
class EmptyWorld : public Error {
 public:
  using Error::Error;
};

// A mutation referenced a unit that does not exist or is already resolved.
class StateError : public Error {
 public:
  using Error::Error;
};

// A persisted document failed validation. `field()` is the path of the
// offending field, e.g. "tasks[0].descriptions[0].successes".
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& field)
      : Error("schema violation at " + field), field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A record in an imported log could not be applied. `line()` is 1-based.
class ImportError : public Error {
 public:
  ImportError(long line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

// A file could not be read or written. `path()` names the file.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace multibandit
