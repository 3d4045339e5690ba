#include "lexiport/unicode.h"

#include <algorithm>
#include <cstdint>
#include <span>

namespace lexiport::unicode {
namespace {

struct PropertyRange {
  char32_t first;
  char32_t last;
  std::uint8_t flags;
};

struct CombiningClassRange {
  char32_t first;
  char32_t last;
  std::uint8_t ccc;
};

struct Mapping {
  char32_t cp;
  std::uint16_t offset;
  std::uint8_t length;
};

struct Composition {
  char32_t first;
  char32_t second;
  char32_t composite;
};

#include "unicode_tables.inc"

enum PropertyFlag : std::uint8_t {
  kControl = 1,
  kSpaceSeparator = 2,
  kPunctuation = 4,
  kNonspacingMark = 8,
  kPythonSpace = 16,
  kCased = 32,
  kCaseIgnorable = 64,
};

constexpr char32_t kMaxCodePoint = 0x10FFFF;
constexpr char32_t kReplacement = 0xFFFD;

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr char32_t kHangulLCount = 19;
constexpr char32_t kHangulVCount = 21;
constexpr char32_t kHangulTCount = 28;
constexpr char32_t kHangulNCount = kHangulVCount * kHangulTCount;
constexpr char32_t kHangulSCount = kHangulLCount * kHangulNCount;

std::uint8_t flags_of(char32_t cp) {
  if (cp > kMaxCodePoint) return kControl;
  const std::span ranges(kPropertyRanges);
  auto it = std::upper_bound(ranges.begin(), ranges.end(), cp,
                             [](char32_t c, const PropertyRange& r) { return c < r.first; });
  return std::prev(it)->flags;
}

const Mapping* find_mapping(std::span<const Mapping> table, char32_t cp) {
  auto it = std::lower_bound(table.begin(), table.end(), cp,
                             [](const Mapping& m, char32_t c) { return m.cp < c; });
  if (it == table.end() || it->cp != cp) return nullptr;
  return &*it;
}

void decompose_into(char32_t cp, std::u32string& out) {
  if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
    const char32_t s = cp - kHangulSBase;
    out.push_back(kHangulLBase + s / kHangulNCount);
    out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
    if (const char32_t t = s % kHangulTCount; t != 0) out.push_back(kHangulTBase + t);
    return;
  }
  const Mapping* m = find_mapping(kDecompositions, cp);
  if (m == nullptr) {
    out.push_back(cp);
    return;
  }
  for (std::size_t i = 0; i < m->length; ++i) decompose_into(kDecompositionPool[m->offset + i], out);
}

char32_t compose_pair(char32_t first, char32_t second) {
  if (first >= kHangulLBase && first < kHangulLBase + kHangulLCount && second >= kHangulVBase &&
      second < kHangulVBase + kHangulVCount) {
    return kHangulSBase + ((first - kHangulLBase) * kHangulVCount + (second - kHangulVBase)) * kHangulTCount;
  }
  if (first >= kHangulSBase && first < kHangulSBase + kHangulSCount && (first - kHangulSBase) % kHangulTCount == 0 &&
      second > kHangulTBase && second < kHangulTBase + kHangulTCount) {
    return first + (second - kHangulTBase);
  }
  const std::span table(kCompositions);
  auto it = std::lower_bound(table.begin(), table.end(), std::pair{first, second},
                             [](const Composition& c, const std::pair<char32_t, char32_t>& key) {
                               return std::pair{c.first, c.second} < key;
                             });
  if (it == table.end() || it->first != first || it->second != second) return 0;
  return it->composite;
}

bool is_cased(char32_t cp) { return (flags_of(cp) & kCased) != 0; }
bool is_case_ignorable(char32_t cp) { return (flags_of(cp) & kCaseIgnorable) != 0; }

// U+03A3 lowers to final sigma when preceded by a cased letter and not
// followed by one, skipping case-ignorable characters in both directions.
bool in_final_sigma_context(std::u32string_view text, std::size_t i) {
  std::size_t j = i;
  bool preceded = false;
  while (j > 0) {
    --j;
    if (!is_case_ignorable(text[j])) {
      preceded = is_cased(text[j]);
      break;
    }
  }
  if (!preceded) return false;
  for (j = i + 1; j < text.size(); ++j) {
    if (!is_case_ignorable(text[j])) return !is_cased(text[j]);
  }
  return true;
}

}  // namespace

std::string_view version() { return kUnicodeVersion; }

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min = 0x10000;
    }
    bool ok = len != 0 && i + len <= n;
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (ok && (cp < min || cp > kMaxCodePoint || (cp >= 0xD800 && cp <= 0xDFFF))) ok = false;
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append_utf8(out, cp);
  return out;
}

bool is_control(char32_t cp) {
  if (cp == U'\t' || cp == U'\n' || cp == U'\r') return false;
  return (flags_of(cp) & kControl) != 0;
}

bool is_whitespace(char32_t cp) {
  if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r') return true;
  return (flags_of(cp) & kSpaceSeparator) != 0;
}

bool is_punctuation(char32_t cp) {
  // ASCII symbols such as "$" and "^" are not category P but are treated as
  // punctuation anyway.
  if ((cp >= 33 && cp <= 47) || (cp >= 58 && cp <= 64) || (cp >= 91 && cp <= 96) || (cp >= 123 && cp <= 126)) {
    return true;
  }
  return (flags_of(cp) & kPunctuation) != 0;
}

bool is_cjk_ideograph(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) || (cp >= 0x20000 && cp <= 0x2A6DF) ||
         (cp >= 0x2A700 && cp <= 0x2B73F) || (cp >= 0x2B740 && cp <= 0x2B81F) || (cp >= 0x2B820 && cp <= 0x2CEAF) ||
         (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x2F800 && cp <= 0x2FA1F);
}

bool is_nonspacing_mark(char32_t cp) { return (flags_of(cp) & kNonspacingMark) != 0; }

bool is_python_space(char32_t cp) { return (flags_of(cp) & kPythonSpace) != 0; }

int combining_class(char32_t cp) {
  const std::span ranges(kCombiningClassRanges);
  auto it = std::upper_bound(ranges.begin(), ranges.end(), cp,
                             [](char32_t c, const CombiningClassRange& r) { return c < r.first; });
  if (it == ranges.begin()) return 0;
  --it;
  return cp <= it->last ? it->ccc : 0;
}

std::u32string nfd(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) decompose_into(cp, out);
  // Canonical ordering: stable sort each run of non-starters by class.
  std::size_t i = 0;
  while (i < out.size()) {
    if (combining_class(out[i]) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < out.size() && combining_class(out[j]) != 0) ++j;
    std::stable_sort(out.begin() + static_cast<std::ptrdiff_t>(i), out.begin() + static_cast<std::ptrdiff_t>(j),
                     [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
    i = j;
  }
  return out;
}

std::u32string nfc(std::u32string_view text) {
  std::u32string buf = nfd(text);
  if (buf.empty()) return buf;
  std::size_t starter_pos = 0;
  char32_t starter = buf[0];
  int last_class = combining_class(starter);
  if (last_class != 0) last_class = 256;  // leading non-starter: nothing composes onto it
  std::size_t write = 1;
  for (std::size_t read = 1; read < buf.size(); ++read) {
    const char32_t ch = buf[read];
    const int ch_class = combining_class(ch);
    const char32_t composite = compose_pair(starter, ch);
    if (composite != 0 && (last_class < ch_class || last_class == 0)) {
      buf[starter_pos] = composite;
      starter = composite;
      continue;
    }
    if (ch_class == 0) {
      starter_pos = write;
      starter = ch;
    }
    last_class = ch_class;
    buf[write++] = ch;
  }
  buf.resize(write);
  return buf;
}

std::u32string to_lower(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t cp = text[i];
    if (cp == 0x03A3) {
      out.push_back(in_final_sigma_context(text, i) ? char32_t{0x03C2} : char32_t{0x03C3});
      continue;
    }
    if (cp < 0x80) {
      out.push_back(cp >= U'A' && cp <= U'Z' ? cp + 32 : cp);
      continue;
    }
    if (const Mapping* m = find_mapping(kLowercase, cp)) {
      out.append(kLowercasePool + m->offset, m->length);
    } else {
      out.push_back(cp);
    }
  }
  return out;
}

}  // namespace lexiport::unicode
