#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "lexiport/embedding_matrix.h"
#include "lexiport/model_io.h"
#include "lexiport/vocabulary.h"

namespace lexiport {

// How well a vocabulary covers a corpus. A word is in-vocab when WordPiece
// keeps it as one non-[UNK] token; fertility is WordPiece tokens per word.
struct CoverageStats {
  std::size_t total_words = 0;
  std::size_t in_vocab_words = 0;
  std::size_t unk_words = 0;
  std::size_t subword_tokens = 0;
  double oov_rate = 0.0;
  double mean_fertility = 0.0;
  double unk_rate = 0.0;
};

// Streams the corpus line by line, so counts do not depend on buffering.
CoverageStats coverage(std::istream& corpus, const Vocabulary& vocab);
CoverageStats coverage(const std::filesystem::path& corpus_path, const Vocabulary& vocab);

struct VocabDiff {
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;
  std::vector<std::string> shared_identical;
  std::vector<std::string> shared_changed;
};

// Token lists follow a's id order (only_in_b follows b's). Rows are compared
// bitwise. Throws InvariantError when the embedding dims differ.
VocabDiff vocab_diff(const ModelArtifact& a, const ModelArtifact& b);

// Error reduction rate, in percent, of model_score over baseline_score
// (both on a 0..100 scale). Throws InvariantError when baseline_score is
// 100 or either score is outside [0, 100].
double err(double baseline_score, double model_score);

struct ErrRow {
  std::string language;
  double distance = 0.0;
  double baseline = 0.0;
  double model = 0.0;
};

// Reads "language,distance,baseline,model" rows (header optional) and
// writes them back with an err column appended.
std::vector<ErrRow> parse_err_table(std::string_view csv);
std::string render_err_table(const std::vector<ErrRow>& rows);

// Pre-training effort: batch size x sequence length x training steps.
struct EffortMetric {
  std::uint64_t batch_size = 0;
  std::uint64_t sequence_length = 0;
  std::uint64_t training_steps = 0;
  std::uint64_t effort = 0;
};

// Throws InvariantError on a zero field or when the product overflows.
EffortMetric effort(std::uint64_t batch_size, std::uint64_t sequence_length, std::uint64_t training_steps);
double effort_ratio(const EffortMetric& a, const EffortMetric& b);

enum class MetricKind { kHammingLoss, kPearson, kAccuracyLike };

MetricKind parse_metric_kind(std::string_view name);
std::string_view to_string(MetricKind kind);

// Maps a metric onto 0..100 where higher is better:
//   hamming_loss  (1 - v) * 100
//   pearson       (v + 1) / 2 * 100
//   accuracy_like v
double rescale(MetricKind kind, double value);

struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct NormStats {
  std::size_t rows = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

// L2 norms of rows [begin, end). Throws InvariantError on an empty or
// out-of-bounds range.
NormStats norm_stats(const EmbeddingMatrix& matrix, RowRange range);

}  // namespace lexiport
