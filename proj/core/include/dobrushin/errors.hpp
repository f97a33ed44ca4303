#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dobrushin {

/// Failure categories surfaced by the library. The CLI maps them to exit codes.
enum class ErrorCode {
  kInvalidArgument,
  kInconsistentCoupling,
  kInfeasibleProgram,
  kUnboundedProgram,
  kDegenerateCycling,
  kInvalidCdf,
  kNoFiniteBound,
  kBracketFailure,
  kMonotonicityViolation,
  kInsufficientTruncation,
  kGridTooSmall,
  kUnsupported,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace dobrushin
