#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexiport/lexicon.h"
#include "lexiport/model_io.h"

namespace lexiport {

// Counters describing one translation run.
//
// entries_total counts valid lexicon entries. entries_used counts entries
// that were applied: for LWM those that produced a phrase embedding, for
// VE/VOM those consulted as the first-listed translation of a vocabulary
// token. targets_added always equals the growth of the vocabulary.
struct TranslationReport {
  std::size_t entries_total = 0;
  std::size_t entries_used = 0;
  std::size_t entries_skipped_all_unk = 0;
  std::size_t entries_skipped_malformed = 0;
  std::size_t targets_added = 0;
  std::size_t targets_collided_existing = 0;
  std::size_t targets_with_multiple_sources = 0;
  std::size_t accent_strip_collisions = 0;
  double elapsed_seconds = 0.0;
};

struct PhraseEmbedding {
  std::vector<float> vector;
  std::size_t contributing_tokens = 0;
};

struct TranslationResult {
  ModelArtifact artifact;
  TranslationReport report;
};

struct TranslateOptions {
  // 0 means thread_count().
  std::size_t threads = 0;
};

// Mean of the phrase's non-[UNK] token rows, accumulated in binary64 and
// rounded once to binary32. Absent when every token is [UNK].
std::optional<PhraseEmbedding> embed_phrase(std::string_view phrase, const ModelArtifact& artifact);

// Lexicon Walk Mapping. Each entry contributes the mean of its source
// tokens' embeddings to its target; a target seen several times gets the
// mean of those per-entry means. Unseen targets are appended in
// first-occurrence order; existing tokens and rows are never modified.
TranslationResult lwm_translate(const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                                const TranslateOptions& options = {});

// Vocabulary Expansion: copies the row of each vocabulary token that is an
// entry's exact source phrase to that token's first-listed target.
TranslationResult ve_translate(const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                               const TranslateOptions& options = {});

// Vocabulary One-on-one Mapping: renames matching tokens in place, keeping
// ids, rows and the vocabulary size.
TranslationResult vom_translate(const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                                const TranslateOptions& options = {});

// Dispatches on strategy; kIdentity is rejected with InvariantError.
TranslationResult translate(Strategy strategy, const ModelArtifact& artifact, const BilingualLexicon& lexicon,
                            const TranslateOptions& options = {});

// Vocabulary Translation Mapping: rewrites target-language text into the
// source language word by word, so the untouched source model can read it.
class VtmRewriter {
 public:
  explicit VtmRewriter(const BilingualLexicon& lexicon);
  std::string rewrite(std::string_view text) const;

 private:
  std::unordered_map<std::string, std::string> target_to_source_;
};

std::string vtm_rewrite(std::string_view text, const BilingualLexicon& lexicon);

}  // namespace lexiport
