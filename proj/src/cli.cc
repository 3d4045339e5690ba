#include "lexiport/cli.h"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "lexiport/analysis.h"
#include "lexiport/error.h"
#include "lexiport/lexicon.h"
#include "lexiport/model_io.h"
#include "lexiport/tokenizer.h"

namespace lexiport::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kStrategies = {"lwm", "ve", "vom"};
const std::vector<std::string> kDelimiters = {"auto", "tab", "space"};
const std::vector<std::string> kMetricKinds = {"hamming_loss", "pearson", "accuracy_like"};

struct Options {
  bool quiet = false;

  std::string strategy;
  std::string model_dir;
  std::string lexicon;
  std::string out_dir;
  std::string delimiter = "auto";

  std::string input;
  std::string output;
  std::string text;
  bool print_ids = false;

  std::string vocab;
  std::string embeddings;
  std::string source_model = "unknown";
  std::string corpus;
  bool json = false;

  std::string dir_a;
  std::string dir_b;

  double baseline = 0.0;
  double model = 0.0;

  std::uint64_t batch = 0;
  std::uint64_t seqlen = 0;
  std::uint64_t steps = 0;
  std::uint64_t baseline_effort = 0;

  std::string metric_kind;
  double metric_value = 0.0;
};

void emit(std::ostream& out, const ordered_json& doc) { out << doc.dump(2) << "\n"; }

ordered_json coverage_json(const CoverageStats& s) {
  ordered_json doc;
  doc["total_words"] = s.total_words;
  doc["in_vocab_words"] = s.in_vocab_words;
  doc["unk_words"] = s.unk_words;
  doc["subword_tokens"] = s.subword_tokens;
  doc["oov_rate"] = s.oov_rate;
  doc["mean_fertility"] = s.mean_fertility;
  doc["unk_rate"] = s.unk_rate;
  return doc;
}

ordered_json norm_json(const NormStats& s) {
  ordered_json doc;
  doc["rows"] = s.rows;
  doc["mean"] = s.mean;
  doc["std"] = s.stddev;
  doc["min"] = s.min;
  doc["max"] = s.max;
  return doc;
}

std::string_view rescale_formula(MetricKind kind) {
  switch (kind) {
    case MetricKind::kHammingLoss:
      return "(1 - value) * 100";
    case MetricKind::kPearson:
      return "(value + 1) / 2 * 100";
    case MetricKind::kAccuracyLike:
      return "value";
  }
  return "value";
}

template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) fn(line);
  if (in.bad()) throw IoError("error reading '" + path + "'");
}

int cmd_translate(const Options& o, std::ostream& err) {
  const Strategy strategy = parse_strategy(o.strategy);
  if (!o.quiet) err << "loading artifact from " << o.model_dir << "\n";
  const ModelArtifact source = load_artifact(o.model_dir);
  const BilingualLexicon lexicon = parse_lexicon(o.lexicon, parse_delimiter_mode(o.delimiter));
  if (!o.quiet) {
    err << "lexicon: " << lexicon.size() << " entries, " << lexicon.skipped_lines() << " lines skipped, "
        << lexicon.duplicate_lines() << " duplicates dropped\n";
  }
  const TranslationResult result = translate(strategy, source, lexicon);
  save_artifact(result.artifact, o.out_dir);
  write_file(std::filesystem::path(o.out_dir) / "report.json", report_json(result.report));
  if (!o.quiet) {
    err << report_render(result.report);
    if (result.report.targets_collided_existing > 0) {
      err << "warning: " << result.report.targets_collided_existing
          << " targets collided with existing tokens and were not added\n";
    }
  }
  return kExitOk;
}

int cmd_vtm(const Options& o, std::ostream& err) {
  const BilingualLexicon lexicon = parse_lexicon(o.lexicon, parse_delimiter_mode(o.delimiter));
  const VtmRewriter rewriter(lexicon);
  std::string rewritten;
  std::size_t lines = 0;
  for_each_line(o.input, [&](const std::string& line) {
    rewritten += rewriter.rewrite(line);
    rewritten.push_back('\n');
    ++lines;
  });
  write_file(o.output, rewritten);
  if (!o.quiet) err << "rewrote " << lines << " lines\n";
  return kExitOk;
}

int cmd_tokenize(const Options& o, std::ostream& out) {
  const Vocabulary vocab = read_vocab(o.vocab);
  auto print = [&](const std::string& line) {
    const TokenizationResult r = tokenize(line, vocab);
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
      if (i > 0) out << ' ';
      if (o.print_ids) {
        out << r.ids[i];
      } else {
        out << r.tokens[i];
      }
    }
    out << '\n';
  };
  if (!o.input.empty()) {
    for_each_line(o.input, print);
  } else {
    print(o.text);
  }
  return kExitOk;
}

int cmd_coverage(const Options& o, std::ostream& out) {
  const Vocabulary vocab = read_vocab(o.vocab);
  const CoverageStats stats = coverage(std::filesystem::path(o.corpus), vocab);
  if (o.json) {
    emit(out, coverage_json(stats));
  } else {
    out << "words: " << stats.total_words << "\n"
        << "in_vocab: " << stats.in_vocab_words << "\n"
        << "oov_rate: " << stats.oov_rate << "\n"
        << "unk_rate: " << stats.unk_rate << "\n"
        << "mean_fertility: " << stats.mean_fertility << "\n";
  }
  return kExitOk;
}

int cmd_diff(const Options& o, std::ostream& out) {
  const ModelArtifact a = load_artifact(o.dir_a);
  const ModelArtifact b = load_artifact(o.dir_b);
  const VocabDiff d = vocab_diff(a, b);
  if (o.json) {
    ordered_json doc;
    doc["only_in_a_count"] = d.only_in_a.size();
    doc["only_in_b_count"] = d.only_in_b.size();
    doc["shared_identical_count"] = d.shared_identical.size();
    doc["shared_changed_count"] = d.shared_changed.size();
    doc["only_in_a"] = d.only_in_a;
    doc["only_in_b"] = d.only_in_b;
    doc["shared_changed"] = d.shared_changed;
    emit(out, doc);
  } else {
    out << "only_in_a: " << d.only_in_a.size() << "\n"
        << "only_in_b: " << d.only_in_b.size() << "\n"
        << "shared_identical: " << d.shared_identical.size() << "\n"
        << "shared_changed: " << d.shared_changed.size() << "\n";
  }
  return kExitOk;
}

int cmd_err(const Options& o, std::ostream& out) {
  if (!o.input.empty()) {
    const std::vector<ErrRow> rows = parse_err_table(read_file(o.input));
    const std::string csv = render_err_table(rows);
    ordered_json doc = ordered_json::array();
    for (const ErrRow& r : rows) {
      ordered_json row;
      row["language"] = r.language;
      row["distance"] = r.distance;
      row["baseline"] = r.baseline;
      row["model"] = r.model;
      row["err"] = err(r.baseline, r.model);
      doc.push_back(std::move(row));
    }
    if (!o.output.empty()) write_file(o.output, csv);
    emit(out, doc);
    return kExitOk;
  }
  ordered_json doc;
  doc["baseline"] = o.baseline;
  doc["model"] = o.model;
  doc["err"] = err(o.baseline, o.model);
  emit(out, doc);
  return kExitOk;
}

int cmd_effort(const Options& o, std::ostream& out) {
  const EffortMetric m = effort(o.batch, o.seqlen, o.steps);
  ordered_json doc;
  doc["batch_size"] = m.batch_size;
  doc["sequence_length"] = m.sequence_length;
  doc["training_steps"] = m.training_steps;
  doc["effort"] = m.effort;
  if (o.baseline_effort != 0) {
    const EffortMetric reference{1, 1, o.baseline_effort, o.baseline_effort};
    doc["baseline_effort"] = o.baseline_effort;
    doc["ratio"] = effort_ratio(m, reference);
  }
  emit(out, doc);
  return kExitOk;
}

int cmd_rescale(const Options& o, std::ostream& out) {
  const MetricKind kind = parse_metric_kind(o.metric_kind);
  ordered_json doc;
  doc["kind"] = std::string(to_string(kind));
  doc["value"] = o.metric_value;
  doc["rescaled"] = rescale(kind, o.metric_value);
  doc["formula"] = std::string(rescale_formula(kind));
  emit(out, doc);
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const BilingualLexicon lexicon = parse_lexicon(o.lexicon, parse_delimiter_mode(o.delimiter));
  const LexiconStats s = lexicon_stats(lexicon);
  ordered_json doc;
  doc["entries"] = s.entries;
  doc["distinct_sources"] = s.distinct_sources;
  doc["distinct_targets"] = s.distinct_targets;
  doc["targets_with_multiple_sources"] = s.targets_with_multiple_sources;
  doc["multiword_sources"] = s.multiword_sources;
  doc["max_sources_per_target"] = s.max_sources_per_target;
  doc["total_lines"] = lexicon.total_lines();
  doc["skipped_lines"] = lexicon.skipped_lines();
  doc["duplicate_lines"] = lexicon.duplicate_lines();
  doc["sha256"] = lexicon.sha256();
  emit(out, doc);
  return kExitOk;
}

int cmd_inspect(const Options& o, std::ostream& out) {
  const ModelArtifact a = load_artifact(o.model_dir);
  const ArtifactMetadata& m = a.metadata();
  ordered_json doc;
  doc["source_model"] = m.source_model;
  doc["strategy"] = std::string(to_string(m.strategy));
  doc["lexicon_sha256"] = m.lexicon_sha256 ? ordered_json(*m.lexicon_sha256) : ordered_json(nullptr);
  doc["original_vocab_size"] = m.original_vocab_size;
  doc["vocab_size"] = a.vocabulary().size();
  doc["embedding_dim"] = m.embedding_dim;
  doc["entries_used"] = m.entries_used;
  doc["entries_skipped"] = m.entries_skipped;
  const std::size_t original = m.original_vocab_size;
  const std::size_t rows = a.embeddings().rows();
  ordered_json norms;
  if (original > 0) norms["original_rows"] = norm_json(norm_stats(a.embeddings(), {0, original}));
  if (rows > original) norms["added_rows"] = norm_json(norm_stats(a.embeddings(), {original, rows}));
  doc["row_norms"] = norms.is_null() ? ordered_json::object() : norms;
  emit(out, doc);
  return kExitOk;
}

int cmd_init(const Options& o, std::ostream& err) {
  Vocabulary vocab = read_vocab(o.vocab);
  EmbeddingMatrix matrix = read_embeddings(o.embeddings);
  const ModelArtifact artifact = ModelArtifact::identity(std::move(vocab), std::move(matrix), o.source_model);
  save_artifact(artifact, o.out_dir);
  if (!o.quiet) {
    err << "wrote artifact with " << artifact.vocabulary().size() << " tokens x " << artifact.embeddings().dim()
        << " dims to " << o.out_dir << "\n";
  }
  return kExitOk;
}

}  // namespace

std::string report_render(const TranslationReport& r) {
  std::ostringstream out;
  out << "entries_total: " << r.entries_total << "\n"
      << "entries_used: " << r.entries_used << "\n"
      << "entries_skipped_all_unk: " << r.entries_skipped_all_unk << "\n"
      << "entries_skipped_malformed: " << r.entries_skipped_malformed << "\n"
      << "targets_added: " << r.targets_added << "\n"
      << "targets_collided_existing: " << r.targets_collided_existing << "\n"
      << "targets_with_multiple_sources: " << r.targets_with_multiple_sources << "\n"
      << "accent_strip_collisions: " << r.accent_strip_collisions << "\n"
      << "elapsed: " << nlohmann::json(r.elapsed_seconds).dump() << " s\n";
  return out.str();
}

std::string report_json(const TranslationReport& r) {
  ordered_json doc;
  doc["entries_total"] = r.entries_total;
  doc["entries_used"] = r.entries_used;
  doc["entries_skipped_all_unk"] = r.entries_skipped_all_unk;
  doc["entries_skipped_malformed"] = r.entries_skipped_malformed;
  doc["targets_added"] = r.targets_added;
  doc["targets_collided_existing"] = r.targets_collided_existing;
  doc["targets_with_multiple_sources"] = r.targets_with_multiple_sources;
  doc["accent_strip_collisions"] = r.accent_strip_collisions;
  doc["elapsed"] = r.elapsed_seconds;
  return doc.dump(2) + "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Translate a pretrained model's vocabulary and embedding layer with a bilingual lexicon", "lexiport"};
  app.require_subcommand(1, 1);
  app.add_flag("-q,--quiet", o.quiet, "Suppress progress output on stderr");

  auto* translate = app.add_subcommand("translate", "Translate an artifact with lwm, ve or vom");
  translate->add_option("--strategy", o.strategy, "Translation strategy")->required()->check(CLI::IsMember(kStrategies));
  translate->add_option("--model-dir", o.model_dir, "Source artifact directory")->required();
  translate->add_option("--lexicon", o.lexicon, "Bilingual lexicon file")->required();
  translate->add_option("--out", o.out_dir, "Output artifact directory")->required();
  translate->add_option("--delimiter", o.delimiter, "Lexicon delimiter")->check(CLI::IsMember(kDelimiters));

  auto* vtm = app.add_subcommand("vtm", "Rewrite target-language text into the source language");
  vtm->add_option("--lexicon", o.lexicon, "Bilingual lexicon file")->required();
  vtm->add_option("--input", o.input, "Input text, one sentence per line")->required();
  vtm->add_option("--output", o.output, "Output file")->required();
  vtm->add_option("--delimiter", o.delimiter, "Lexicon delimiter")->check(CLI::IsMember(kDelimiters));

  auto* tok = app.add_subcommand("tokenize", "Tokenize text with a vocabulary");
  tok->add_option("--vocab", o.vocab, "Vocabulary file")->required();
  auto* text_opt = tok->add_option("--text", o.text, "Text to tokenize");
  auto* input_opt = tok->add_option("--input", o.input, "File to tokenize line by line");
  text_opt->excludes(input_opt);
  tok->add_flag("--ids", o.print_ids, "Print token ids instead of strings");

  auto* cov = app.add_subcommand("coverage", "Vocabulary coverage of a corpus");
  cov->add_option("--vocab", o.vocab, "Vocabulary file")->required();
  cov->add_option("--corpus", o.corpus, "Corpus file")->required();
  cov->add_flag("--json", o.json, "Emit JSON");

  auto* diff = app.add_subcommand("diff", "Compare two artifacts");
  diff->add_option("--a", o.dir_a, "First artifact directory")->required();
  diff->add_option("--b", o.dir_b, "Second artifact directory")->required();
  diff->add_flag("--json", o.json, "Emit JSON");

  auto* err_cmd = app.add_subcommand("err", "Error reduction rate");
  auto* baseline_opt = err_cmd->add_option("--baseline", o.baseline, "Baseline score (0-100)");
  auto* model_opt = err_cmd->add_option("--model", o.model, "Model score (0-100)");
  auto* table_opt = err_cmd->add_option("--input", o.input, "CSV of language,distance,baseline,model");
  err_cmd->add_option("--output", o.output, "Write the CSV with an err column here")->needs(table_opt);
  baseline_opt->needs(model_opt);
  model_opt->needs(baseline_opt);
  table_opt->excludes(baseline_opt);

  auto* eff = app.add_subcommand("effort", "Pre-training effort (batch x seqlen x steps)");
  eff->add_option("--batch", o.batch, "Batch size")->required();
  eff->add_option("--seqlen", o.seqlen, "Sequence length")->required();
  eff->add_option("--steps", o.steps, "Training steps")->required();
  eff->add_option("--baseline-effort", o.baseline_effort, "Effort to compare against");

  auto* resc = app.add_subcommand("rescale", "Map a metric onto a 0-100 scale");
  resc->add_option("--kind", o.metric_kind, "Metric kind")->required()->check(CLI::IsMember(kMetricKinds));
  resc->add_option("--value", o.metric_value, "Metric value")->required();

  auto* stats = app.add_subcommand("stats", "Lexicon statistics");
  stats->add_option("--lexicon", o.lexicon, "Bilingual lexicon file")->required();
  stats->add_option("--delimiter", o.delimiter, "Lexicon delimiter")->check(CLI::IsMember(kDelimiters));

  auto* inspect = app.add_subcommand("inspect", "Dump artifact metadata");
  inspect->add_option("--model-dir", o.model_dir, "Artifact directory")->required();

  auto* init = app.add_subcommand("init", "Package a vocabulary and tensor container as an artifact");
  init->add_option("--vocab", o.vocab, "Vocabulary file")->required();
  init->add_option("--embeddings", o.embeddings, "Tensor container")->required();
  init->add_option("--out", o.out_dir, "Output artifact directory")->required();
  init->add_option("--source-model", o.source_model, "Name recorded in the metadata");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (tok->parsed() && o.text.empty() && o.input.empty()) {
    err << "error: tokenize needs --text or --input\n\n" << tok->help();
    return kExitUsage;
  }
  if (err_cmd->parsed() && o.input.empty() && baseline_opt->count() == 0) {
    err << "error: err needs --baseline and --model, or --input\n\n" << err_cmd->help();
    return kExitUsage;
  }

  try {
    if (translate->parsed()) return cmd_translate(o, err);
    if (vtm->parsed()) return cmd_vtm(o, err);
    if (tok->parsed()) return cmd_tokenize(o, out);
    if (cov->parsed()) return cmd_coverage(o, out);
    if (diff->parsed()) return cmd_diff(o, out);
    if (err_cmd->parsed()) return cmd_err(o, out);
    if (eff->parsed()) return cmd_effort(o, out);
    if (resc->parsed()) return cmd_rescale(o, out);
    if (stats->parsed()) return cmd_stats(o, out);
    if (inspect->parsed()) return cmd_inspect(o, out);
    if (init->parsed()) return cmd_init(o, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lexiport::cli
