#include "pgbandit/error.hpp"

namespace pgbandit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::simplex_violation: return "simplex_violation";
    case ErrorCode::integration_failure: return "integration_failure";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    case ErrorCode::fit: return "fit";
  }
  return "unknown";
}

}  // namespace pgbandit
