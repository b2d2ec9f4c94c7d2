#include "volta/error.hpp"

namespace volta {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kArgument: return "argument";
    case ErrorCode::kIndex: return "index";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kModeling: return "modeling";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kDefinedness: return "definedness";
    case ErrorCode::kBudget: return "budget";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace volta
