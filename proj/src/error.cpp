#include "streamcount/error.hpp"

namespace streamcount {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kIsolatedVertex: return "IsolatedVertex";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kVertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::kNeighborIndexOutOfRange: return "NeighborIndexOutOfRange";
    case ErrorCode::kEmptySampleSet: return "EmptySampleSet";
    case ErrorCode::kPassBudgetExceeded: return "PassBudgetExceeded";
    case ErrorCode::kSizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::kInvalidChurn: return "InvalidChurn";
    case ErrorCode::kMalformedStream: return "MalformedStream";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace streamcount
