#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cwrm {

enum class ErrorCode {
  BadConfig,
  NonFinite,
  TooFewPoints,
  LengthMismatch,
  ZeroWeights,
  NonPositiveVariance,
  NotSymmetric,
  NotPositiveDefinite,
  DegenerateDensity,
  DegenerateValues,
  EmptyComponent,
  NoConvergence,
  AllStartsFailed,
  TooLarge,
  UnknownPreset,
  ParseError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by the M-step when a component's posterior mass collapses; the
// driver uses the index list to redraw exactly the dead components.
class EmptyComponentError : public Error {
 public:
  EmptyComponentError(std::vector<int> components, const std::string& message)
      : Error(ErrorCode::EmptyComponent, message),
        components_(std::move(components)) {}

  [[nodiscard]] const std::vector<int>& components() const noexcept {
    return components_;
  }

 private:
  std::vector<int> components_;
};

}  // namespace cwrm
