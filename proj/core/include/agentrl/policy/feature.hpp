#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agentrl {

inline constexpr uint32_t kFeatureDim = 1u << 16;

// Turns of history visible to the policy; older turns are truncated.
inline constexpr int kHistoryWindow = 4;

// Sparse vector over feature indices, sorted by index, one entry per index.
// Values are counts for hashed text features and reals for gradients.
struct SparseVector {
  std::vector<std::pair<uint32_t, double>> entries;

  double dot(std::span<const double> dense) const;

  bool operator==(const SparseVector&) const = default;
};

using FeatureVector = SparseVector;

// Lowercased whitespace tokens.
std::vector<std::string> tokenize_lower(std::string_view text);

// Hashed unigrams and adjacent bigrams over "last-4-lines(history) || action"
// plus match features between the window lines and the action. The matches
// carry the state-action interaction: without them every history-only
// feature is shared by all candidates and cancels in the softmax, leaving
// the policy blind to state.
//
// A match feature fires when a window token literally reappears in the
// action. It is labeled with the line's age ("cur" for the line being acted
// on, "old" for earlier lines — a fact three turns stale must be able to
// carry a different weight than a fresh one) and with the first token of the
// token's segment, where segments open at a line start, " | ", or the "=>"
// before a past action ("bases oak" and "missing oak" must act differently
// on "get oak"). Count prefixes are stripped so inventory's "2xoak" matches
// recipe text "oak". The action side carries the action's head token plus
// the matched position's role (head/obj/arg), so "craft oak_gear" and "...
// using oak_gear" are distinct contexts for the same word. Only matches are
// emitted — a dense token cross would bury these few meaningful indices
// under hundreds of hashed-noise buckets per candidate. Indices are
// FNV-1a-64 mod 2^16.
FeatureVector featurize(std::string_view history_text, std::string_view action);

}  // namespace agentrl
