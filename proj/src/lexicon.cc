#include "lexiport/lexicon.h"

#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "lexiport/error.h"
#include "lexiport/hash.h"
#include "lexiport/model_io.h"
#include "lexiport/tokenizer.h"

namespace lexiport {
namespace {

struct PairHash {
  std::size_t operator()(const std::pair<std::string_view, std::string_view>& p) const noexcept {
    const std::size_t h = std::hash<std::string_view>{}(p.first);
    return h ^ (std::hash<std::string_view>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

std::string_view trim_ascii(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_on(std::string_view line, char delim, bool collapse) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(delim, pos);
    if (end == std::string_view::npos) end = line.size();
    if (!collapse || end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return fields;
}

std::optional<LexiconEntry> make_entry(std::string_view source, std::string_view target, std::size_t line_no) {
  LexiconEntry entry;
  entry.source_phrase = normalize(source);
  entry.target_word = normalize(target);
  if (entry.source_phrase.empty() || entry.target_word.empty()) return std::nullopt;
  // A multiword target can never come out of the whitespace-splitting tokenizer.
  if (entry.target_word.find(' ') != std::string::npos) return std::nullopt;
  entry.line_no = line_no;
  entry.raw_target = std::string(trim_ascii(target));
  return entry;
}

std::optional<LexiconEntry> parse_line(std::string_view line, std::size_t line_no, DelimiterMode mode) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (trim_ascii(line).empty() || line.front() == '#') return std::nullopt;
  const bool tab = mode == DelimiterMode::kTab || (mode == DelimiterMode::kAuto && line.find('\t') != line.npos);
  if (tab) {
    const auto fields = split_on(line, '\t', false);
    if (fields.size() < 2) return std::nullopt;
    std::string source;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
      if (i > 0) source.push_back(' ');
      source.append(fields[i]);
    }
    return make_entry(source, fields.back(), line_no);
  }
  const auto fields = split_on(trim_ascii(line), ' ', true);
  if (fields.size() != 2) return std::nullopt;
  return make_entry(fields[0], fields[1], line_no);
}

// Keeps the first occurrence of each (source, target) pair.
std::size_t drop_duplicates(std::vector<LexiconEntry>& entries) {
  std::vector<bool> keep(entries.size());
  {
    std::unordered_set<std::pair<std::string_view, std::string_view>, PairHash> seen;
    seen.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      keep[i] = seen.emplace(entries[i].source_phrase, entries[i].target_word).second;
    }
  }
  std::vector<LexiconEntry> kept;
  kept.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (keep[i]) kept.push_back(std::move(entries[i]));
  }
  const std::size_t dropped = entries.size() - kept.size();
  entries = std::move(kept);
  return dropped;
}

}  // namespace

DelimiterMode parse_delimiter_mode(std::string_view name) {
  if (name == "auto") return DelimiterMode::kAuto;
  if (name == "tab") return DelimiterMode::kTab;
  if (name == "space") return DelimiterMode::kSpace;
  throw FormatError("unknown delimiter mode '" + std::string(name) + "' (expected auto, tab or space)");
}

BilingualLexicon::BilingualLexicon(std::vector<LexiconEntry> entries, std::size_t skipped, std::size_t duplicates,
                                   std::size_t total)
    : entries_(std::move(entries)),
      sha256_(fingerprint(entries_)),
      skipped_lines_(skipped),
      duplicate_lines_(duplicates),
      total_lines_(total) {}

BilingualLexicon BilingualLexicon::from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<LexiconEntry> entries;
  entries.reserve(pairs.size());
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (auto e = make_entry(pairs[i].first, pairs[i].second, i + 1)) {
      entries.push_back(std::move(*e));
    } else {
      ++skipped;
    }
  }
  const std::size_t dups = drop_duplicates(entries);
  return BilingualLexicon(std::move(entries), skipped, dups, pairs.size());
}

BilingualLexicon parse_lexicon_text(std::string_view text, DelimiterMode mode) {
  std::vector<LexiconEntry> entries;
  std::size_t skipped = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    if (auto e = parse_line(text.substr(pos, end - pos), line_no, mode)) {
      entries.push_back(std::move(*e));
    } else {
      ++skipped;
    }
    pos = end + 1;
  }
  const std::size_t dups = drop_duplicates(entries);
  if (entries.empty()) {
    throw FormatError("lexicon has no valid entries (" + std::to_string(line_no) + " lines read)");
  }
  return BilingualLexicon(std::move(entries), skipped, dups, line_no);
}

BilingualLexicon parse_lexicon(const std::filesystem::path& path, DelimiterMode mode) {
  const std::string text = read_file(path);
  try {
    return parse_lexicon_text(text, mode);
  } catch (const FormatError& e) {
    throw FormatError("'" + path.string() + "': " + e.what());
  }
}

std::string fingerprint(const std::vector<LexiconEntry>& entries) {
  Sha256 hash;
  for (const LexiconEntry& e : entries) {
    hash.update(e.source_phrase);
    hash.update("\t");
    hash.update(e.target_word);
    hash.update("\n");
  }
  return hash.hex_digest();
}

LexiconStats lexicon_stats(const BilingualLexicon& lexicon) {
  LexiconStats stats;
  stats.entries = lexicon.size();
  std::unordered_set<std::string_view> sources;
  std::unordered_map<std::string_view, std::size_t> sources_per_target;
  for (const LexiconEntry& e : lexicon.entries()) {
    sources.insert(e.source_phrase);
    // Entries are unique pairs, so each one adds a distinct source.
    ++sources_per_target[e.target_word];
    if (e.source_phrase.find(' ') != std::string::npos) ++stats.multiword_sources;
  }
  stats.distinct_sources = sources.size();
  stats.distinct_targets = sources_per_target.size();
  for (const auto& [target, count] : sources_per_target) {
    if (count >= 2) ++stats.targets_with_multiple_sources;
    stats.max_sources_per_target = std::max(stats.max_sources_per_target, count);
  }
  return stats;
}

}  // namespace lexiport
