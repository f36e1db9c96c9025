#pragma once

#include <stdexcept>
#include <string>

namespace streamcount {

enum class ErrorCode {
  kInvalidParams,
  kInvalidGraph,
  kIsolatedVertex,
  kIndexOutOfRange,
  kEmptyGraph,
  kVertexOutOfRange,
  kNeighborIndexOutOfRange,
  kEmptySampleSet,
  kPassBudgetExceeded,
  kSizeLimitExceeded,
  kInvalidChurn,
  kMalformedStream,
  kParseError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace streamcount
