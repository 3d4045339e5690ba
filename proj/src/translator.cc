#include "lexiport/translator.h"

#include <algorithm>
#include <chrono>
#include <unordered_set>

#include "lexiport/error.h"
#include "lexiport/parallel.h"
#include "lexiport/tokenizer.h"
#include "lexiport/unicode.h"

namespace lexiport {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<TokenId> known_token_ids(std::string_view phrase, const Vocabulary& vocab) {
  const TokenId unk = vocab.unk_id();
  std::vector<TokenId> ids = tokenize(phrase, vocab).ids;
  std::erase(ids, unk);
  return ids;
}

// Per-dimension mean of the given rows, summed in token order in binary64.
void mean_of_rows(const std::vector<TokenId>& ids, const EmbeddingMatrix& matrix, std::vector<double>& out) {
  out.assign(matrix.dim(), 0.0);
  for (TokenId id : ids) {
    const auto row = matrix.row(static_cast<std::size_t>(id));
    for (std::size_t k = 0; k < row.size(); ++k) out[k] += static_cast<double>(row[k]);
  }
  const auto n = static_cast<double>(ids.size());
  for (double& v : out) v /= n;
}

std::size_t resolve_threads(const TranslateOptions& options) {
  return options.threads != 0 ? options.threads : thread_count();
}

// Distinct normalized targets written with more than one spelling once
// only accents are ignored ("está" and "esta" both become "esta").
std::size_t count_accent_strip_collisions(const BilingualLexicon& lexicon) {
  std::unordered_map<std::string_view, std::unordered_set<std::string>> spellings;
  for (const LexiconEntry& e : lexicon.entries()) {
    const std::u32string folded = unicode::to_lower(unicode::nfc(unicode::decode_utf8(e.raw_target)));
    spellings[e.target_word].insert(unicode::encode_utf8(folded));
  }
  std::size_t collisions = 0;
  for (const auto& [target, forms] : spellings) {
    if (forms.size() >= 2) ++collisions;
  }
  return collisions;
}

// First entry index for every distinct source phrase.
std::unordered_map<std::string_view, std::size_t> first_entry_by_source(const BilingualLexicon& lexicon) {
  std::unordered_map<std::string_view, std::size_t> first;
  first.reserve(lexicon.size());
  for (std::size_t i = 0; i < lexicon.size(); ++i) first.emplace(lexicon.entries()[i].source_phrase, i);
  return first;
}

TranslationReport base_report(const BilingualLexicon& lexicon) {
  TranslationReport report;
  report.entries_total = lexicon.size();
  report.entries_skipped_malformed = lexicon.skipped_lines();
  report.accent_strip_collisions = count_accent_strip_collisions(lexicon);
  return report;
}

TranslationResult finish(const ModelArtifact& source, Strategy strategy, const BilingualLexicon& lexicon,
                         Vocabulary vocab, EmbeddingMatrix matrix, TranslationReport report, Clock::time_point start) {
  ArtifactMetadata meta;
  meta.source_model = source.metadata().source_model;
  meta.strategy = strategy;
  meta.lexicon_sha256 = lexicon.sha256();
  meta.original_vocab_size = source.vocabulary().size();
  meta.embedding_dim = matrix.dim();
  meta.entries_used = report.entries_used;
  meta.entries_skipped = report.entries_skipped_all_unk + report.entries_skipped_malformed;
  report.targets_added = vocab.size() - source.vocabulary().size();
  ModelArtifact artifact(std::move(vocab), std::move(matrix), std::move(meta));
  report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return {std::move(artifact), report};
}

}  // namespace

std::optional<PhraseEmbedding> embed_phrase(std::string_view phrase, const ModelArtifact& artifact) {
  const std::vector<TokenId> ids = known_token_ids(phrase, artifact.vocabulary());
  if (ids.empty()) return std::nullopt;
  std::vector<double> mean;
  mean_of_rows(ids, artifact.embeddings(), mean);
  PhraseEmbedding out;
  out.vector.reserve(mean.size());
  for (double v : mean) out.vector.push_back(static_cast<float>(v));
  out.contributing_tokens = ids.size();
  return out;
}

TranslationResult lwm_translate(const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                                const TranslateOptions& options) {
  const auto start = Clock::now();
  const Vocabulary& vocab = artifact.vocabulary();
  const EmbeddingMatrix& matrix = artifact.embeddings();
  const auto& entries = lexicon.entries();
  const std::size_t threads = resolve_threads(options);
  TranslationReport report = base_report(lexicon);

  std::vector<std::vector<TokenId>> entry_ids(entries.size());
  parallel_for(entries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) entry_ids[i] = known_token_ids(entries[i].source_phrase, vocab);
  });

  // Group contributing entries by target, in first-occurrence order.
  struct TargetGroup {
    std::string_view word;
    std::vector<std::size_t> entries;
  };
  std::vector<TargetGroup> groups;
  std::unordered_map<std::string_view, std::size_t> group_of;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entry_ids[i].empty()) {
      ++report.entries_skipped_all_unk;
      continue;
    }
    ++report.entries_used;
    auto [it, inserted] = group_of.emplace(entries[i].target_word, groups.size());
    if (inserted) groups.push_back({entries[i].target_word, {}});
    groups[it->second].entries.push_back(i);
  }

  std::vector<const TargetGroup*> added;
  for (const TargetGroup& g : groups) {
    if (g.entries.size() >= 2) ++report.targets_with_multiple_sources;
    if (vocab.contains(g.word)) {
      ++report.targets_collided_existing;
    } else {
      added.push_back(&g);
    }
  }

  // Source rows are copied verbatim; new rows fill the tail in place.
  const std::size_t dim = matrix.dim();
  const std::size_t source_values = matrix.values().size();
  std::vector<float> values(source_values + added.size() * dim);
  std::copy(matrix.values().begin(), matrix.values().end(), values.begin());
  parallel_for(added.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> entry_mean;
    std::vector<double> sum;
    for (std::size_t t = begin; t < end; ++t) {
      sum.assign(dim, 0.0);
      for (std::size_t i : added[t]->entries) {
        mean_of_rows(entry_ids[i], matrix, entry_mean);
        for (std::size_t k = 0; k < dim; ++k) sum[k] += entry_mean[k];
      }
      const auto n = static_cast<double>(added[t]->entries.size());
      float* dst = values.data() + source_values + t * dim;
      for (std::size_t k = 0; k < dim; ++k) dst[k] = static_cast<float>(sum[k] / n);
    }
  });

  std::vector<std::string> tokens = vocab.tokens();
  tokens.reserve(tokens.size() + added.size());
  for (const TargetGroup* g : added) tokens.emplace_back(g->word);
  EmbeddingMatrix out_matrix(tokens.size(), dim, std::move(values));
  return finish(artifact, Strategy::kLwm, lexicon, Vocabulary::from_tokens(std::move(tokens)), std::move(out_matrix),
                report, start);
}

TranslationResult ve_translate(const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                               const TranslateOptions& /*options*/) {
  const auto start = Clock::now();
  const Vocabulary& vocab = artifact.vocabulary();
  const EmbeddingMatrix& matrix = artifact.embeddings();
  TranslationReport report = base_report(lexicon);
  const auto first = first_entry_by_source(lexicon);

  std::vector<std::string> tokens = vocab.tokens();
  EmbeddingMatrix out_matrix = matrix;
  std::unordered_map<std::string_view, std::size_t> hits;
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const std::string& w = vocab.tokens()[id];
    if (Vocabulary::is_special(w)) continue;
    const auto it = first.find(w);
    if (it == first.end()) continue;
    ++report.entries_used;
    const std::string& target = lexicon.entries()[it->second].target_word;
    if (vocab.contains(target)) {
      ++report.targets_collided_existing;
      continue;
    }
    // The first (lowest-id) source for a target wins.
    if (++hits[target] > 1) {
      if (hits[target] == 2) ++report.targets_with_multiple_sources;
      continue;
    }
    tokens.push_back(target);
    out_matrix.append_row(matrix.row(id));
  }
  return finish(artifact, Strategy::kVe, lexicon, Vocabulary::from_tokens(std::move(tokens)), std::move(out_matrix),
                report, start);
}

TranslationResult vom_translate(const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                                const TranslateOptions& /*options*/) {
  const auto start = Clock::now();
  const Vocabulary& vocab = artifact.vocabulary();
  TranslationReport report = base_report(lexicon);
  const auto first = first_entry_by_source(lexicon);

  std::vector<std::string> tokens = vocab.tokens();
  std::unordered_set<std::string_view> current(vocab.tokens().begin(), vocab.tokens().end());
  std::unordered_set<std::string_view> used_targets;
  std::unordered_map<std::string_view, std::size_t> hits;
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const std::string& w = vocab.tokens()[id];
    if (Vocabulary::is_special(w)) continue;
    const auto it = first.find(w);
    if (it == first.end()) continue;
    ++report.entries_used;
    const std::string& target = lexicon.entries()[it->second].target_word;
    if (++hits[target] == 2) ++report.targets_with_multiple_sources;
    if (current.contains(target) || used_targets.contains(target)) {
      ++report.targets_collided_existing;
      continue;
    }
    current.erase(w);
    current.insert(target);
    used_targets.insert(target);
    tokens[id] = target;
  }
  return finish(artifact, Strategy::kVom, lexicon, Vocabulary::from_tokens(std::move(tokens)), artifact.embeddings(),
                report, start);
}

TranslationResult translate(Strategy strategy, const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                            const TranslateOptions& options) {
  switch (strategy) {
    case Strategy::kLwm:
      return lwm_translate(artifact, lexicon, options);
    case Strategy::kVe:
      return ve_translate(artifact, lexicon, options);
    case Strategy::kVom:
      return vom_translate(artifact, lexicon, options);
    case Strategy::kIdentity:
      break;
  }
  throw InvariantError("'identity' is not a translation strategy");
}

VtmRewriter::VtmRewriter(const BilingualLexicon& lexicon) {
  for (const LexiconEntry& e : lexicon.entries()) target_to_source_.try_emplace(e.target_word, e.source_phrase);
}

std::string VtmRewriter::rewrite(std::string_view text) const {
  const std::string normalized = normalize(text);
  std::string out;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    std::size_t end = normalized.find(' ', pos);
    if (end == std::string::npos) end = normalized.size();
    const std::string word = normalized.substr(pos, end - pos);
    if (!out.empty()) out.push_back(' ');
    const auto it = target_to_source_.find(word);
    out += it != target_to_source_.end() ? it->second : word;
    pos = end + 1;
  }
  return out;
}

std::string vtm_rewrite(std::string_view text, const BilingualLexicon& lexicon) {
  return VtmRewriter(lexicon).rewrite(text);
}

}  // namespace lexiport
