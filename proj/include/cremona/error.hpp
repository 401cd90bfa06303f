#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cremona {

enum class ErrorKind {
  DivisionByZero,
  UnsupportedDecomposition,
  UnsupportedSplitting,
  DenominatorVanishesIdentically,
  DegreeCapExceeded,
  NotInvertible,
  OrderMismatch,
  ParseError,
  ArityMismatch,
  NonInvertibleLinearPart,
  InvalidArgument,
  Internal,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::DivisionByZero: return "DivisionByZero";
  case ErrorKind::UnsupportedDecomposition: return "UnsupportedDecomposition";
  case ErrorKind::UnsupportedSplitting: return "UnsupportedSplitting";
  case ErrorKind::DenominatorVanishesIdentically:
    return "DenominatorVanishesIdentically";
  case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
  case ErrorKind::NotInvertible: return "NotInvertible";
  case ErrorKind::OrderMismatch: return "OrderMismatch";
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::ArityMismatch: return "ArityMismatch";
  case ErrorKind::NonInvertibleLinearPart: return "NonInvertibleLinearPart";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the engine carries one of the named kinds above so
/// that the command line can report it verbatim.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const char *message) {
  if (!condition) throw Error(kind, message);
}

} // namespace cremona
