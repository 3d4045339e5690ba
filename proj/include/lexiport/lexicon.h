#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexiport {

struct LexiconEntry {
  std::string source_phrase;  // normalized; may contain single internal spaces
  std::string target_word;    // normalized; no whitespace
  std::size_t line_no = 0;    // 1-based origin line
  std::string raw_target;     // target as written, before normalization

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

enum class DelimiterMode { kAuto, kTab, kSpace };

// Throws FormatError for anything other than "auto", "tab" or "space".
DelimiterMode parse_delimiter_mode(std::string_view name);

// Bilingual lexicon in file order, exact duplicates removed (first kept).
// Immutable after construction.
class BilingualLexicon {
 public:
  BilingualLexicon() : BilingualLexicon(std::vector<LexiconEntry>{}, 0, 0, 0) {}

  // Normalizes each (source, target) pair the same way the file parser does;
  // invalid pairs are counted as skipped. May be empty.
  static BilingualLexicon from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::string& sha256() const { return sha256_; }

  // valid entries + skipped_lines + duplicate_lines == total_lines
  std::size_t skipped_lines() const { return skipped_lines_; }
  std::size_t duplicate_lines() const { return duplicate_lines_; }
  std::size_t total_lines() const { return total_lines_; }

 private:
  friend BilingualLexicon parse_lexicon_text(std::string_view text, DelimiterMode mode);

  BilingualLexicon(std::vector<LexiconEntry> entries, std::size_t skipped, std::size_t duplicates,
                   std::size_t total);

  std::vector<LexiconEntry> entries_;
  std::string sha256_;
  std::size_t skipped_lines_ = 0;
  std::size_t duplicate_lines_ = 0;
  std::size_t total_lines_ = 0;
};

// Throws FormatError when no valid entry survives.
BilingualLexicon parse_lexicon_text(std::string_view text, DelimiterMode mode = DelimiterMode::kAuto);
// Throws IoError when unreadable, FormatError when no valid entry survives.
BilingualLexicon parse_lexicon(const std::filesystem::path& path, DelimiterMode mode = DelimiterMode::kAuto);

// SHA-256 over "source\ttarget\n" for each entry, in order.
std::string fingerprint(const std::vector<LexiconEntry>& entries);

struct LexiconStats {
  std::size_t entries = 0;
  std::size_t distinct_sources = 0;
  std::size_t distinct_targets = 0;
  std::size_t targets_with_multiple_sources = 0;
  std::size_t multiword_sources = 0;
  std::size_t max_sources_per_target = 0;

  friend bool operator==(const LexiconStats&, const LexiconStats&) = default;
};

LexiconStats lexicon_stats(const BilingualLexicon& lexicon);

}  // namespace lexiport
