#include "agentrl/common/error.hpp"

namespace agentrl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
      return "VALIDATION";
    case ErrorCode::kNotFound:
      return "NOT_FOUND";
    case ErrorCode::kNotReset:
      return "NOT_RESET";
    case ErrorCode::kEpisodeOver:
      return "EPISODE_OVER";
    case ErrorCode::kBusy:
      return "BUSY";
    case ErrorCode::kCapacity:
      return "CAPACITY";
    case ErrorCode::kNumeric:
      return "NUMERIC";
    case ErrorCode::kCollectionFailed:
      return "COLLECTION_FAILED";
    case ErrorCode::kInternal:
      return "INTERNAL";
  }
  return "INTERNAL";
}

ErrorCode error_code_from_string(const std::string& name) {
  if (name == "VALIDATION") return ErrorCode::kValidation;
  if (name == "NOT_FOUND") return ErrorCode::kNotFound;
  if (name == "NOT_RESET") return ErrorCode::kNotReset;
  if (name == "EPISODE_OVER") return ErrorCode::kEpisodeOver;
  if (name == "BUSY") return ErrorCode::kBusy;
  if (name == "CAPACITY") return ErrorCode::kCapacity;
  if (name == "NUMERIC") return ErrorCode::kNumeric;
  if (name == "COLLECTION_FAILED") return ErrorCode::kCollectionFailed;
  if (name == "INTERNAL") return ErrorCode::kInternal;
  throw Error(ErrorCode::kValidation, "unknown error code: " + name);
}

}  // namespace agentrl
