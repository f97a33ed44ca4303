#include "dobrushin/errors.hpp"

namespace dobrushin {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInconsistentCoupling: return "inconsistent-coupling";
    case ErrorCode::kInfeasibleProgram: return "infeasible-program";
    case ErrorCode::kUnboundedProgram: return "unbounded-program";
    case ErrorCode::kDegenerateCycling: return "degenerate-cycling";
    case ErrorCode::kInvalidCdf: return "invalid-cdf";
    case ErrorCode::kNoFiniteBound: return "no-finite-bound";
    case ErrorCode::kBracketFailure: return "bracket-failure";
    case ErrorCode::kMonotonicityViolation: return "monotonicity-violation";
    case ErrorCode::kInsufficientTruncation: return "insufficient-truncation";
    case ErrorCode::kGridTooSmall: return "grid-too-small";
    case ErrorCode::kUnsupported: return "unsupported";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace dobrushin
