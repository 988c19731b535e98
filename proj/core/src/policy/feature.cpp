#include "agentrl/policy/feature.hpp"

#include <algorithm>
#include <cctype>

#include "agentrl/common/fnv.hpp"

namespace agentrl {
namespace {

uint32_t bucket(uint64_t hash) { return static_cast<uint32_t>(hash % kFeatureDim); }

uint64_t hash_pair(const std::string& a, std::string_view sep,
                   const std::string& b) {
  return fnv1a64(b, fnv1a64(sep, fnv1a64(a)));
}

// Match feature: a history token that reappears verbatim in the action. The
// history side carries the line's age ("cur" for the line the policy is
// acting on, "old" for earlier window lines) and the token's segment tag; the
// action side carries the action's head token and the matched position's role
// ("head", "obj" for the token right after the head, "arg" for the rest).
// Age, tag, and role let one vocabulary-level weight mean "craft X while X is
// missing right now" as opposed to "any action mentioning X".
uint64_t hash_match(std::string_view age, const std::string& tag,
                    std::string_view token, const std::string& head,
                    std::string_view role, const std::string& action_token) {
  uint64_t h = fnv1a64(":", fnv1a64(age));
  h = fnv1a64(":", fnv1a64(tag, h));
  h = fnv1a64("\t", fnv1a64(token, h));
  h = fnv1a64(":", fnv1a64(head, h));
  h = fnv1a64(":", fnv1a64(role, h));
  return fnv1a64(action_token, h);
}

std::string_view action_role(size_t position) {
  if (position == 0) return "head";
  if (position == 1) return "obj";
  return "arg";
}

// "2xoak" -> "oak": inventory counts prefix the item name, but recipe and
// action text spell the bare name.
std::string_view strip_count_prefix(std::string_view token) {
  size_t digits = 0;
  while (digits < token.size() &&
         std::isdigit(static_cast<unsigned char>(token[digits])))
    ++digits;
  if (digits > 0 && digits + 1 < token.size() && token[digits] == 'x')
    return token.substr(digits + 1);
  return token;
}

}  // namespace

double SparseVector::dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (const auto& [index, value] : entries) sum += dense[index] * value;
  return sum;
}

std::vector<std::string> tokenize_lower(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

FeatureVector featurize(std::string_view history_text,
                        std::string_view action) {
  // Keep the last kHistoryWindow lines; one line per turn.
  size_t start = history_text.size();
  for (int lines = 0; start > 0; --start) {
    if (history_text[start - 1] == '\n' && ++lines == kHistoryWindow) break;
  }
  std::string_view window = history_text.substr(start);

  std::vector<std::string> stream = tokenize_lower(window);
  std::vector<std::string> action_tokens = tokenize_lower(action);
  stream.emplace_back("||");
  stream.insert(stream.end(), action_tokens.begin(), action_tokens.end());

  std::vector<uint32_t> indices;
  indices.reserve(2 * stream.size());
  for (const auto& token : stream) indices.push_back(bucket(fnv1a64(token)));
  for (size_t i = 0; i + 1 < stream.size(); ++i)
    indices.push_back(bucket(hash_pair(stream[i], " ", stream[i + 1])));
  // Match features over every window line: the first token after a line
  // start, a "|", or the "=>" that introduces a past action names the
  // segment; later tokens are content. Only content tokens that literally
  // reappear in the action emit a feature, so candidates differ in a handful
  // of meaningful indices instead of a dense cross product of mostly-noise
  // buckets. Matches are presence indicators: a fact repeated across window
  // lines counts once, so a state like "inventory 3xoak" cannot snowball a
  // weight by sheer repetition.
  std::vector<uint32_t> matches;
  const std::string* head =
      action_tokens.empty() ? nullptr : &action_tokens.front();
  size_t line_start = 0;
  while (line_start <= window.size()) {
    size_t line_end = window.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = window.size();
    std::string_view age =
        line_end == window.size() ? "cur" : "old";
    std::vector<std::string> line_tokens =
        tokenize_lower(window.substr(line_start, line_end - line_start));
    const std::string* tag = nullptr;
    for (const auto& h : line_tokens) {
      if (h == "|" || h == "=>") {
        tag = nullptr;
        continue;
      }
      if (tag == nullptr) {
        tag = &h;
        continue;
      }
      std::string_view token = strip_count_prefix(h);
      for (size_t p = 0; p < action_tokens.size(); ++p)
        if (token == action_tokens[p])
          matches.push_back(bucket(hash_match(age, *tag, token, *head,
                                              action_role(p),
                                              action_tokens[p])));
    }
    line_start = line_end + 1;
  }
  std::sort(matches.begin(), matches.end());
  matches.erase(std::unique(matches.begin(), matches.end()), matches.end());
  indices.insert(indices.end(), matches.begin(), matches.end());

  std::sort(indices.begin(), indices.end());
  FeatureVector out;
  out.entries.reserve(indices.size());
  for (size_t i = 0; i < indices.size();) {
    size_t j = i;
    while (j < indices.size() && indices[j] == indices[i]) ++j;
    out.entries.emplace_back(indices[i], static_cast<double>(j - i));
    i = j;
  }
  return out;
}

}  // namespace agentrl
