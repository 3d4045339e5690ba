#include "lexiport/analysis.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "lexiport/error.h"
#include "lexiport/tokenizer.h"

namespace lexiport {
namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view field, std::size_t line_no) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + std::string(field) + "'");
  }
  return v;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw InvariantError("effort overflows 64 bits");
  return out;
}

}  // namespace

CoverageStats coverage(std::istream& corpus, const Vocabulary& vocab) {
  CoverageStats stats;
  const std::string unk(kUnkToken);
  std::string line;
  while (std::getline(corpus, line)) {
    for (const std::string& word : basic_tokenize(line, kRequiredSpecials)) {
      const std::vector<std::string> pieces = wordpiece(word, vocab);
      ++stats.total_words;
      stats.subword_tokens += pieces.size();
      if (pieces.size() == 1) {
        if (pieces[0] == unk) {
          ++stats.unk_words;
        } else {
          ++stats.in_vocab_words;
        }
      }
    }
  }
  if (corpus.bad()) throw IoError("error reading corpus");
  if (stats.total_words > 0) {
    const auto total = static_cast<double>(stats.total_words);
    stats.oov_rate = static_cast<double>(stats.total_words - stats.in_vocab_words) / total;
    stats.unk_rate = static_cast<double>(stats.unk_words) / total;
    stats.mean_fertility = static_cast<double>(stats.subword_tokens) / total;
  }
  return stats;
}

CoverageStats coverage(const std::filesystem::path& corpus_path, const Vocabulary& vocab) {
  std::ifstream in(corpus_path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus '" + corpus_path.string() + "'");
  return coverage(in, vocab);
}

VocabDiff vocab_diff(const ModelArtifact& a, const ModelArtifact& b) {
  const EmbeddingMatrix& ma = a.embeddings();
  const EmbeddingMatrix& mb = b.embeddings();
  if (ma.dim() != mb.dim()) {
    throw InvariantError("embedding dim mismatch: " + std::to_string(ma.dim()) + " vs " + std::to_string(mb.dim()));
  }
  VocabDiff diff;
  const Vocabulary& va = a.vocabulary();
  const Vocabulary& vb = b.vocabulary();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const std::string& token = va.tokens()[i];
    const auto j = vb.find(token);
    if (!j) {
      diff.only_in_a.push_back(token);
      continue;
    }
    const auto ra = ma.row(i);
    const auto rb = mb.row(static_cast<std::size_t>(*j));
    const bool same = std::equal(ra.begin(), ra.end(), rb.begin(), [](float x, float y) {
      return std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y);
    });
    (same ? diff.shared_identical : diff.shared_changed).push_back(token);
  }
  for (const std::string& token : vb.tokens()) {
    if (!va.contains(token)) diff.only_in_b.push_back(token);
  }
  return diff;
}

double err(double baseline_score, double model_score) {
  if (!(baseline_score >= 0.0 && baseline_score <= 100.0) || !(model_score >= 0.0 && model_score <= 100.0)) {
    throw InvariantError("scores must lie in [0, 100]");
  }
  if (baseline_score == 100.0) throw InvariantError("error reduction rate is undefined for a baseline of 100");
  const double baseline_error = 100.0 - baseline_score;
  const double model_error = 100.0 - model_score;
  return 100.0 * (baseline_error - model_error) / baseline_error;
}

std::vector<ErrRow> parse_err_table(std::string_view csv) {
  std::vector<ErrRow> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t f = 0;
    while (true) {
      const std::size_t comma = line.find(',', f);
      fields.push_back(line.substr(f, comma == std::string_view::npos ? std::string_view::npos : comma - f));
      if (comma == std::string_view::npos) break;
      f = comma + 1;
    }
    if (line_no == 1 && fields[0] == "language") continue;
    if (fields.size() != 4) {
      throw FormatError("line " + std::to_string(line_no) + ": expected language,distance,baseline,model");
    }
    rows.push_back({std::string(fields[0]), parse_double(fields[1], line_no), parse_double(fields[2], line_no),
                    parse_double(fields[3], line_no)});
  }
  return rows;
}

std::string render_err_table(const std::vector<ErrRow>& rows) {
  std::string out = "language,distance,baseline,model,err\n";
  for (const ErrRow& r : rows) {
    out += r.language + "," + format_double(r.distance) + "," + format_double(r.baseline) + "," +
           format_double(r.model) + "," + format_double(err(r.baseline, r.model)) + "\n";
  }
  return out;
}

EffortMetric effort(std::uint64_t batch_size, std::uint64_t sequence_length, std::uint64_t training_steps) {
  if (batch_size == 0 || sequence_length == 0 || training_steps == 0) {
    throw InvariantError("effort fields must be positive");
  }
  return {batch_size, sequence_length, training_steps,
          checked_mul(checked_mul(batch_size, sequence_length), training_steps)};
}

double effort_ratio(const EffortMetric& a, const EffortMetric& b) {
  if (a.effort == 0 || b.effort == 0) throw InvariantError("effort must be positive");
  return static_cast<double>(a.effort) / static_cast<double>(b.effort);
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "hamming_loss") return MetricKind::kHammingLoss;
  if (name == "pearson") return MetricKind::kPearson;
  if (name == "accuracy_like") return MetricKind::kAccuracyLike;
  throw FormatError("unknown metric kind '" + std::string(name) + "'");
}

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kHammingLoss:
      return "hamming_loss";
    case MetricKind::kPearson:
      return "pearson";
    case MetricKind::kAccuracyLike:
      return "accuracy_like";
  }
  return "accuracy_like";
}

double rescale(MetricKind kind, double value) {
  auto require = [&](double lo, double hi) {
    if (!(value >= lo && value <= hi)) {
      throw InvariantError(std::string(to_string(kind)) + " value " + format_double(value) + " outside [" +
                           format_double(lo) + ", " + format_double(hi) + "]");
    }
  };
  switch (kind) {
    case MetricKind::kHammingLoss:
      require(0.0, 1.0);
      return (1.0 - value) * 100.0;
    case MetricKind::kPearson:
      require(-1.0, 1.0);
      return (value + 1.0) / 2.0 * 100.0;
    case MetricKind::kAccuracyLike:
      require(0.0, 100.0);
      return value;
  }
  return value;
}

NormStats norm_stats(const EmbeddingMatrix& matrix, RowRange range) {
  if (range.begin >= range.end) throw InvariantError("norm_stats needs a non-empty row range");
  if (range.end > matrix.rows()) {
    throw InvariantError("row range end " + std::to_string(range.end) + " exceeds " + std::to_string(matrix.rows()) +
                         " rows");
  }
  NormStats stats;
  stats.rows = range.end - range.begin;
  std::vector<double> norms;
  norms.reserve(stats.rows);
  for (std::size_t r = range.begin; r < range.end; ++r) {
    double sq = 0.0;
    for (float v : matrix.row(r)) sq += static_cast<double>(v) * static_cast<double>(v);
    norms.push_back(std::sqrt(sq));
  }
  double sum = 0.0;
  for (double n : norms) sum += n;
  stats.mean = sum / static_cast<double>(norms.size());
  double var = 0.0;
  for (double n : norms) var += (n - stats.mean) * (n - stats.mean);
  stats.stddev = std::sqrt(var / static_cast<double>(norms.size()));
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  stats.min = *lo;
  stats.max = *hi;
  return stats;
}

}  // namespace lexiport
