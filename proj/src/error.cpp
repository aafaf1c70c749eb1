#include "janaka/error.hpp"

namespace janaka {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::UnsupportedNegation: return "UnsupportedNegation";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::NotInNNF: return "NotInNNF";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::MixedPadding: return "MixedPadding";
    case ErrorCode::PartialAssignment: return "PartialAssignment";
    case ErrorCode::PadTooShort: return "PadTooShort";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ProviderUnreachable: return "ProviderUnreachable";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::NoValidFormula: return "NoValidFormula";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::NoTemplates: return "NoTemplates";
    case ErrorCode::UnsupportedForExport: return "UnsupportedForExport";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) { return 3 + static_cast<int>(code); }

static std::string decorate(ErrorCode code, const std::string& message,
                            std::optional<std::size_t> position) {
  std::string out(to_string(code));
  out += ": ";
  out += message;
  if (position) out += " (at offset " + std::to_string(*position) + ")";
  return out;
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> position)
    : std::runtime_error(decorate(code, message, position)),
      code_(code),
      position_(position) {}

}  // namespace janaka
