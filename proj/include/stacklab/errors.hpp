#ifndef STACKLAB_ERRORS_HPP
#define STACKLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stacklab {

enum class ErrorKind {
  NotAnAction,
  UnknownObject,
  MismatchedBase,
  NotEquivariant,
  NonInjectiveInclusion,
  UnknownGroupRef,
  DisconnectedGraph,
  MalformedWord,
  BallTooLarge,
  InvalidAction,
  CapExceeded,
  SyntaxError,
  SchemaError,
  ValidationError,
  UnsupportedKind,
  Usage,
};

const char *error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " +
                           message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

/// Parse-time error carrying a source position (1-based line/column, or a
/// byte offset when line structure is unavailable).
class PositionedError : public Error {
public:
  PositionedError(ErrorKind kind, std::string message, std::size_t line,
                  std::size_t column)
      : Error(kind, "line " + std::to_string(line) + ", col " +
                        std::to_string(column) + ": " + message),
        line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

} // namespace stacklab

#endif
