#pragma once

#include <stdexcept>
#include <string>

namespace lst {

enum class ErrorKind {
  NotBound,
  IllTyped,
  Incompatible,
  NotMaximal,
  MissingBinding,
  HistTypeError,
  DivByZero,
  UnboundVar,
  OrderViolation,
  InertnessViolation,
  BufferIllTyped,
  RecOutsideFix,
  SigMismatch,
  ShapeMismatch,
  TypeMismatch,
  CaptureError,
  FuelExhausted,
  RuntimeTypeFault,
  IllTypedEvent,
  ParseError,
  ScopeError,
  UnknownFunction,
  ArityMismatch,
  NonClosedTypeArg,
  MacroCycle,
  IoError,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + msg), kind_(kind), detail_(msg) {}
  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

  // True for the failures a typing derivation can produce, as opposed to
  // runtime faults or parse problems.
  bool is_typing() const;

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace lst
