#pragma once

#include <stdexcept>
#include <string>

namespace agentrl {

enum class ErrorCode {
  kValidation,
  kNotFound,
  kNotReset,
  kEpisodeOver,
  kBusy,
  kCapacity,
  kNumeric,
  kCollectionFailed,
  kInternal,
};

const char* to_string(ErrorCode code);
ErrorCode error_code_from_string(const std::string& name);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when rollout collection fails; keeps the code of the underlying
// client or service error so callers can distinguish transport faults from
// environment faults.
class CollectionError : public Error {
 public:
  CollectionError(ErrorCode underlying, const std::string& message)
      : Error(ErrorCode::kCollectionFailed, message), underlying_(underlying) {}

  ErrorCode underlying() const { return underlying_; }

 private:
  ErrorCode underlying_;
};

}  // namespace agentrl
