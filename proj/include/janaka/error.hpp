#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace janaka {

enum class ErrorCode {
  InvalidArgument,
  EmptyInput,
  SyntaxError,
  UnknownAtom,
  UnsupportedNegation,
  DepthExceeded,
  NotInNNF,
  EmptyTrace,
  EmptySample,
  MixedPadding,
  PartialAssignment,
  PadTooShort,
  BudgetExhausted,
  ProviderUnreachable,
  RateLimited,
  NoValidFormula,
  AuthMissing,
  NoTemplates,
  UnsupportedForExport,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Process exit code for an error: 3 + the enumerator index, so 0 and 2
/// stay reserved for "threshold met" and "best effort".
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  /// Byte offset into the parsed input, for syntax-level errors.
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

/// Thrown by providers on HTTP 429; carries the server's retry hint.
class RateLimitedError : public Error {
 public:
  RateLimitedError(const std::string& message, double retry_after_seconds)
      : Error(ErrorCode::RateLimited, message), retry_after_(retry_after_seconds) {}
  double retry_after() const noexcept { return retry_after_; }

 private:
  double retry_after_;
};

}  // namespace janaka
