#include "lexiport/tokenizer.h"

#include <algorithm>

#include "lexiport/unicode.h"

namespace lexiport {
namespace {

namespace uc = unicode;

// Drops NUL, U+FFFD and control characters; maps whitespace to ' '.
std::u32string clean_text(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp == 0 || cp == 0xFFFD || uc::is_control(cp)) continue;
    out.push_back(uc::is_whitespace(cp) ? U' ' : cp);
  }
  return out;
}

std::u32string isolate_cjk(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (uc::is_cjk_ideograph(cp)) {
      out.push_back(U' ');
      out.push_back(cp);
      out.push_back(U' ');
    } else {
      out.push_back(cp);
    }
  }
  return out;
}

// str.split() semantics: runs of Python whitespace separate, empties dropped.
std::vector<std::u32string> split_whitespace(std::u32string_view text) {
  std::vector<std::u32string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && uc::is_python_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !uc::is_python_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::u32string strip_accents(std::u32string_view text) {
  std::u32string decomposed = uc::nfd(text);
  std::erase_if(decomposed, [](char32_t cp) { return uc::is_nonspacing_mark(cp); });
  return decomposed;
}

std::u32string lower_and_strip(std::u32string_view word) { return strip_accents(uc::to_lower(word)); }

bool in_list(std::string_view word, std::span<const std::string_view> list) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

}  // namespace

std::string normalize(std::string_view text) {
  const std::u32string prepared = uc::nfc(clean_text(uc::decode_utf8(text)));
  std::string out;
  for (const std::u32string& chunk : split_whitespace(prepared)) {
    const std::u32string word = lower_and_strip(chunk);
    for (const std::u32string& piece : split_whitespace(word)) {
      if (!out.empty()) out.push_back(' ');
      out += uc::encode_utf8(piece);
    }
  }
  return out;
}

std::vector<std::string> basic_tokenize(std::string_view text, std::span<const std::string_view> never_split) {
  const std::u32string prepared = uc::nfc(isolate_cjk(clean_text(uc::decode_utf8(text))));
  std::vector<std::string> words;
  for (const std::u32string& chunk : split_whitespace(prepared)) {
    std::string utf8 = uc::encode_utf8(chunk);
    if (in_list(utf8, never_split)) {
      words.push_back(std::move(utf8));
      continue;
    }
    const std::u32string word = lower_and_strip(chunk);
    std::u32string current;
    auto flush = [&] {
      if (!current.empty()) {
        words.push_back(uc::encode_utf8(current));
        current.clear();
      }
    };
    for (char32_t cp : word) {
      if (uc::is_punctuation(cp)) {
        flush();
        words.push_back(uc::encode_utf8(std::u32string_view(&cp, 1)));
      } else if (uc::is_python_space(cp)) {
        flush();
      } else {
        current.push_back(cp);
      }
    }
    flush();
  }
  return words;
}

std::vector<std::string> wordpiece(std::string_view word, const Vocabulary& vocab, std::size_t max_chars) {
  const std::string unk(kUnkToken);
  const std::u32string cps = uc::decode_utf8(word);
  if (cps.empty()) return {};
  if (cps.size() > max_chars) return {unk};

  // Byte offset of every code point boundary, so pieces are plain substrings.
  const std::string utf8 = uc::encode_utf8(cps);
  std::vector<std::size_t> offsets;
  offsets.reserve(cps.size() + 1);
  std::size_t pos = 0;
  for (char32_t cp : cps) {
    offsets.push_back(pos);
    pos += cp < 0x80 ? 1 : cp < 0x800 ? 2 : cp < 0x10000 ? 3 : 4;
  }
  offsets.push_back(pos);

  std::vector<std::string> pieces;
  std::string candidate;
  std::size_t start = 0;
  while (start < cps.size()) {
    std::size_t end = cps.size();
    bool found = false;
    while (start < end) {
      candidate.clear();
      if (start > 0) candidate = "##";
      candidate.append(utf8, offsets[start], offsets[end] - offsets[start]);
      if (vocab.contains(candidate)) {
        found = true;
        break;
      }
      --end;
    }
    if (!found) return {unk};
    pieces.push_back(candidate);
    start = end;
  }
  return pieces;
}

TokenizationResult tokenize(std::string_view text, const Vocabulary& vocab) {
  TokenizationResult result;
  const TokenId unk = vocab.unk_id();
  auto emit_segment = [&](std::string_view segment) {
    for (const std::string& word : basic_tokenize(segment, kRequiredSpecials)) {
      for (std::string& piece : wordpiece(word, vocab)) {
        const auto id = vocab.find(piece);
        result.ids.push_back(id.value_or(unk));
        result.tokens.push_back(id ? std::move(piece) : std::string(kUnkToken));
      }
    }
  };
  // Special tokens written verbatim anywhere in the raw text are cut out
  // before any cleanup, so "a[SEP]b" yields a, [SEP], b.
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t hit = std::string_view::npos;
    std::string_view special;
    for (std::string_view s : kRequiredSpecials) {
      const std::size_t at = text.find(s, pos);
      if (at < hit) {
        hit = at;
        special = s;
      }
    }
    if (hit == std::string_view::npos) break;
    emit_segment(text.substr(pos, hit - pos));
    result.ids.push_back(vocab.id(special));
    result.tokens.emplace_back(special);
    pos = hit + special.size();
  }
  emit_segment(text.substr(std::min(pos, text.size())));
  return result;
}

}  // namespace lexiport
