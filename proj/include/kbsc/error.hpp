#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kbsc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position in a model source file; line 0 means "no location".
struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Malformed or invariant-violating model.
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what, SourceLocation where = {})
      : Error(where.line > 0 ? "line " + std::to_string(where.line) + ":" +
                                   std::to_string(where.column) + ": " + what
                             : what),
        where_(where) {}

  SourceLocation where() const { return where_; }

 private:
  SourceLocation where_;
};

/// A requested enumeration depth or instance size exceeds the configured limit.
class BoundError : public Error {
 public:
  using Error::Error;
};

/// Two automata compared for language equivalence use different event sets.
class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

/// A formula mentions an event that the model does not define.
class UnknownEvent : public Error {
 public:
  using Error::Error;
};

}  // namespace kbsc
