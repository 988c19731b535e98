#pragma once

#include <cstdint>
#include <string_view>

namespace agentrl {

inline constexpr uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr uint64_t kFnvPrime = 1099511628211ull;

// FNV-1a over the bytes of `text`, continuing from `state` so multi-part
// strings hash identically to their concatenation without allocating.
constexpr uint64_t fnv1a64(std::string_view text,
                           uint64_t state = kFnvOffsetBasis) {
  for (char c : text) {
    state ^= static_cast<unsigned char>(c);
    state *= kFnvPrime;
  }
  return state;
}

}  // namespace agentrl
