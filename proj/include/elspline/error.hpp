#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elspline {

enum class ErrorCode {
  DomainError,
  NoConvergence,
  CoincidentPoints,
  EmptyFeasible,
  NotApplicable,
  ParseError,
  InfeasibleClamp,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DomainError: return "domain_error";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::CoincidentPoints: return "coincident_points";
    case ErrorCode::EmptyFeasible: return "empty_feasible";
    case ErrorCode::NotApplicable: return "not_applicable";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::InfeasibleClamp: return "infeasible_clamp";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace elspline
