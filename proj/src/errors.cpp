#include "stacklab/errors.hpp"

namespace stacklab {

const char *error_kind_name(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::NotAnAction:
    return "NotAnAction";
  case ErrorKind::UnknownObject:
    return "UnknownObject";
  case ErrorKind::MismatchedBase:
    return "MismatchedBase";
  case ErrorKind::NotEquivariant:
    return "NotEquivariant";
  case ErrorKind::NonInjectiveInclusion:
    return "NonInjectiveInclusion";
  case ErrorKind::UnknownGroupRef:
    return "UnknownGroupRef";
  case ErrorKind::DisconnectedGraph:
    return "DisconnectedGraph";
  case ErrorKind::MalformedWord:
    return "MalformedWord";
  case ErrorKind::BallTooLarge:
    return "BallTooLarge";
  case ErrorKind::InvalidAction:
    return "InvalidAction";
  case ErrorKind::CapExceeded:
    return "CapExceeded";
  case ErrorKind::SyntaxError:
    return "SyntaxError";
  case ErrorKind::SchemaError:
    return "SchemaError";
  case ErrorKind::ValidationError:
    return "ValidationError";
  case ErrorKind::UnsupportedKind:
    return "UnsupportedKind";
  case ErrorKind::Usage:
    return "Usage";
  }
  return "Error";
}

} // namespace stacklab
