#pragma once

#include <string>
#include <string_view>

// Unicode support for the uncased BERT pipeline. Character classes follow
// the reference Python tokenizer exactly, so the tables are generated from
// CPython's unicodedata (see scripts/gen_unicode_tables.py).
namespace lexiport::unicode {

std::string_view version();

// Malformed sequences decode to U+FFFD, one per offending byte.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// \t, \n and \r count as whitespace, not control.
bool is_control(char32_t cp);
bool is_whitespace(char32_t cp);
bool is_punctuation(char32_t cp);
bool is_cjk_ideograph(char32_t cp);
bool is_nonspacing_mark(char32_t cp);
// Matches Python's str.isspace(), which drives str.split().
bool is_python_space(char32_t cp);

int combining_class(char32_t cp);

std::u32string nfd(std::u32string_view text);
std::u32string nfc(std::u32string_view text);

// Full lowercase mapping with the final-sigma rule, as str.lower().
std::u32string to_lower(std::u32string_view text);

}  // namespace lexiport::unicode
