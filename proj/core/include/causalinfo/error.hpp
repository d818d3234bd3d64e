#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalinfo {

enum class ErrorKind {
  UnknownVariable,
  ZeroProbabilityEvent,
  ScopeOverlap,
  BadScope,
  InvalidPmf,
  InvalidModel,
  CycleCreated,
  RangeMismatch,
  BadQuery,
  JointTooLarge,
  Parse,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace causalinfo
