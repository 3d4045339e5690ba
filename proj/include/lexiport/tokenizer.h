#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexiport/vocabulary.h"

// Uncased BERT tokenization: a basic tokenizer (cleanup, CJK isolation, NFC,
// lowercasing, accent stripping, punctuation splitting) followed by greedy
// longest-match-first WordPiece.
namespace lexiport {

inline constexpr std::size_t kDefaultMaxCharsPerWord = 100;

struct TokenizationResult {
  std::vector<std::string> tokens;
  std::vector<TokenId> ids;

  friend bool operator==(const TokenizationResult&, const TokenizationResult&) = default;
};

// Control characters dropped, whitespace collapsed to single spaces, NFC,
// lowercased, accents stripped. Punctuation is left attached.
std::string normalize(std::string_view text);

// Words in the exact form the reference basic tokenizer produces. Any
// whitespace-delimited chunk equal to an entry of never_split is passed
// through untouched.
std::vector<std::string> basic_tokenize(std::string_view text, std::span<const std::string_view> never_split = {});

// Greedy WordPiece over one basic-tokenizer word. Words longer than
// max_chars code points, or words with no complete segmentation, become a
// single "[UNK]".
std::vector<std::string> wordpiece(std::string_view word, const Vocabulary& vocab,
                                   std::size_t max_chars = kDefaultMaxCharsPerWord);

// No [CLS]/[SEP] framing is added. Special tokens that appear verbatim in
// the text (case-sensitive) are kept whole, even inside a word.
TokenizationResult tokenize(std::string_view text, const Vocabulary& vocab);

}  // namespace lexiport
