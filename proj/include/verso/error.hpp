#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace verso {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kDomain,
  kParse,
  kEmptyResult,
  kInsufficientCandidates,
  kGuardExceeded,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code so the
/// service layer can map it onto a response without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace verso
