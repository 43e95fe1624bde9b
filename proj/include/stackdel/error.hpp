#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stackdel {

enum class ErrorCode {
  kLengthMismatch,
  kNegativeQuantity,
  kNegativeIncentive,
  kBadN,
  kInvalidParams,
  kDegenerateDemand,
  kNonInterior,
  kNonConcave,
  kSingularSystem,
  kNoConvergence,
  kInvalidGrid,
  kGridTooCoarse,
  kThresholdBracket,
  kInconsistent,
  kUsage,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::kNegativeQuantity: return "NEGATIVE_QUANTITY";
    case ErrorCode::kNegativeIncentive: return "NEGATIVE_INCENTIVE";
    case ErrorCode::kBadN: return "BAD_N";
    case ErrorCode::kInvalidParams: return "INVALID_PARAMS";
    case ErrorCode::kDegenerateDemand: return "DEGENERATE_DEMAND";
    case ErrorCode::kNonInterior: return "NONINTERIOR";
    case ErrorCode::kNonConcave: return "NONCONCAVE";
    case ErrorCode::kSingularSystem: return "SINGULAR_SYSTEM";
    case ErrorCode::kNoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::kInvalidGrid: return "INVALID_GRID";
    case ErrorCode::kGridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::kThresholdBracket: return "THRESHOLD_BRACKET";
    case ErrorCode::kInconsistent: return "INCONSISTENT";
    case ErrorCode::kUsage: return "USAGE";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw ModelError(code, message);
}

// Internal cross-checks between two independent derivations.
inline void ensure(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::kInconsistent, what);
}

}  // namespace stackdel
