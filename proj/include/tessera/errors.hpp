#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tessera {

// Base of every error raised by the engine. Callers that only need a message
// can catch this; the service layer maps the concrete types onto HTTP codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed N-Quads / update / query text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class InvalidTerm : public Error {
 public:
  using Error::Error;
};

// Well-formed SPARQL that falls outside the restricted grammar.
class UnsupportedConstruct : public Error {
 public:
  using Error::Error;
};

class InvalidChangeSet : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  using Error::Error;
};

class BlankNodePresent : public Error {
 public:
  using Error::Error;
};

class EntityMismatch : public Error {
 public:
  using Error::Error;
};

class HistoryCorrupt : public Error {
 public:
  using Error::Error;
};

class AlreadyVersioned : public Error {
 public:
  using Error::Error;
};

class NoHistory : public Error {
 public:
  using Error::Error;
};

class EmptyDiff : public Error {
 public:
  using Error::Error;
};

class UnknownVersion : public Error {
 public:
  using Error::Error;
};

class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

class MalformedList : public Error {
 public:
  using Error::Error;
};

// Raised for shapes whose constraints contradict each other (max < min, ...).
class InvalidShape : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class OrderError : public Error {
 public:
  enum class Kind { Cycle, Branch, Disconnected };

  OrderError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace tessera
