#include "lexiport/vocabulary.h"

#include <algorithm>
#include <limits>

#include "lexiport/error.h"

namespace lexiport {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<TokenId>(i));
  }
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() > static_cast<std::size_t>(std::numeric_limits<TokenId>::max())) {
    throw InvariantError("vocabulary too large: " + std::to_string(tokens.size()) + " tokens");
  }
  std::unordered_map<std::string_view, std::size_t> seen;
  seen.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t.empty()) throw InvariantError("empty token at id " + std::to_string(i));
    if (t.find('\n') != std::string::npos) {
      throw InvariantError("token at id " + std::to_string(i) + " contains a newline");
    }
    auto [it, inserted] = seen.emplace(t, i);
    if (!inserted) {
      throw InvariantError("duplicate token '" + t + "' at ids " + std::to_string(it->second) + " and " +
                           std::to_string(i));
    }
  }
  std::string missing;
  for (std::string_view special : kRequiredSpecials) {
    if (!seen.contains(special)) {
      if (!missing.empty()) missing += ", ";
      missing += special;
    }
  }
  if (!missing.empty()) throw InvariantError("vocabulary is missing required special tokens: " + missing);
  return Vocabulary(std::move(tokens));
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw InvariantError("token not in vocabulary: '" + std::string(token) + "'");
  return it->second;
}

bool Vocabulary::is_special(std::string_view token) {
  return std::find(kRequiredSpecials.begin(), kRequiredSpecials.end(), token) != kRequiredSpecials.end();
}

}  // namespace lexiport
