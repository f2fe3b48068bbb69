#pragma once

#include <stdexcept>
#include <string>

namespace negkw {

enum class ErrorKind {
  MalformedKeyword,
  InvalidInput,
  DuplicateKeyword,
  UnknownKeyword,
  LimitExceeded,
  InfeasibleTarget,
  SizeLimit,
  Generator,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedKeyword: return "malformed-keyword";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::DuplicateKeyword: return "duplicate-keyword";
    case ErrorKind::UnknownKeyword: return "unknown-keyword";
    case ErrorKind::LimitExceeded: return "limit-exceeded";
    case ErrorKind::InfeasibleTarget: return "infeasible-target";
    case ErrorKind::SizeLimit: return "size-limit";
    case ErrorKind::Generator: return "generator";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The text without the kind prefix, for rewrapping with more context.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace negkw
