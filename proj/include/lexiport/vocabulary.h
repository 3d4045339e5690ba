#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexiport {

using TokenId = std::int32_t;

inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";

inline constexpr std::array<std::string_view, 5> kRequiredSpecials = {kPadToken, kUnkToken, kClsToken, kSepToken,
                                                                      kMaskToken};

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

// Ordered token table. A token's id is its position; ids are contiguous.
// Instances are immutable once built, so they can be shared across threads.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Throws InvariantError on empty or duplicate tokens, tokens containing a
  // newline, or a missing required special token.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::optional<TokenId> find(std::string_view token) const;
  bool contains(std::string_view token) const { return index_.find(token) != index_.end(); }
  // Throws InvariantError when the token is absent.
  TokenId id(std::string_view token) const;

  TokenId unk_id() const { return id(kUnkToken); }
  static bool is_special(std::string_view token);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  explicit Vocabulary(std::vector<std::string> tokens);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> index_;
};

}  // namespace lexiport
