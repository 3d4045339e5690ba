#include "lexiport/cli.h"

#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "test_support.h"

namespace lexiport {
namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lexiport");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(17);
    const ModelArtifact a = ModelArtifact::identity(testing::make_vocab({"cat", "dog", "big", "large", "hot"}),
                                                    testing::random_matrix(rng, 10, 4), "tiny");
    save_artifact(a, dir_ / "model");
    testing::write_text(dir_ / "lex.txt", "cat gato\ndog perro\nbig grande\nlarge grande\ncat dog\n# c\nzz yy\n");
  }
  std::string p(std::string_view name) const { return (dir_ / name).string(); }
  testing::TempDir dir_;
};

TEST_F(CliTest, TranslateWritesArtifactAndReport) {
  const CliRun r = run_cli({"translate", "--strategy", "lwm", "--model-dir", p("model"), "--lexicon", p("lex.txt"),
                         "--out", p("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const ModelArtifact out = load_artifact(dir_ / "out");
  EXPECT_EQ(out.vocabulary().size(), 13u);
  const auto report = nlohmann::json::parse(read_file(dir_ / "out" / "report.json"));
  EXPECT_EQ(report["targets_added"], 3);
  EXPECT_EQ(report["targets_collided_existing"], 1);
  EXPECT_EQ(report["entries_skipped_all_unk"], 1);
  EXPECT_EQ(report["entries_skipped_malformed"], 1);
  EXPECT_TRUE(report.contains("elapsed"));
  EXPECT_NE(r.err.find("targets_added: 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, QuietSilencesStderr) {
  const CliRun r = run_cli({"--quiet", "translate", "--strategy", "vom", "--model-dir", p("model"), "--lexicon",
                         p("lex.txt"), "--out", p("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  EXPECT_EQ(load_artifact(dir_ / "out").vocabulary().size(), 10u);
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  const CliRun r = run_cli({"translate", "--strategy", "lwm", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"translate", "--strategy", "vtm", "--model-dir", "a", "--lexicon", "b", "--out", "c"}).code, 1);
  EXPECT_EQ(run_cli({"tokenize", "--vocab", "v"}).code, 1);
  EXPECT_EQ(run_cli({"err", "--baseline", "3"}).code, 1);
}

TEST_F(CliTest, MismatchIsDataError) {
  write_embeddings(EmbeddingMatrix::zeros(9, 4), dir_ / "model" / kEmbeddingsFileName);
  const CliRun r = run_cli({"inspect", "--model-dir", p("model")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("10 vs 9"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliTest, MissingInputsAreDataErrors) {
  EXPECT_EQ(run_cli({"stats", "--lexicon", p("nope.txt")}).code, 2);
  EXPECT_EQ(run_cli({"err", "--baseline", "100", "--model", "90"}).code, 2);
  EXPECT_EQ(run_cli({"effort", "--batch", "0", "--seqlen", "1", "--steps", "1"}).code, 2);
}

TEST_F(CliTest, Tokenize) {
  testing::write_text(dir_ / "v.txt", "[PAD]\n[UNK]\n[CLS]\n[SEP]\n[MASK]\nhot\ndog\n##s\n");
  CliRun r = run_cli({"tokenize", "--vocab", p("v.txt"), "--text", "Hot dogs!"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "hot dog ##s [UNK]\n");
  r = run_cli({"tokenize", "--vocab", p("v.txt"), "--text", "Hot dogs!", "--ids"});
  EXPECT_EQ(r.out, "5 6 7 1\n");
  testing::write_text(dir_ / "in.txt", "hot\n\ndog\n");
  r = run_cli({"tokenize", "--vocab", p("v.txt"), "--input", p("in.txt")});
  EXPECT_EQ(r.out, "hot\n\ndog\n");
}

TEST_F(CliTest, CoverageJson) {
  testing::write_text(dir_ / "c.txt", "cat dog\nperro\n");
  const CliRun r = run_cli({"coverage", "--vocab", p("model/vocab.txt"), "--corpus", p("c.txt"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["total_words"], 3);
  EXPECT_EQ(doc["in_vocab_words"], 2);
}

TEST_F(CliTest, DiffJson) {
  ASSERT_EQ(run_cli({"-q", "translate", "--strategy", "ve", "--model-dir", p("model"), "--lexicon", p("lex.txt"),
                     "--out", p("ve")})
                .code,
            0);
  const CliRun r = run_cli({"diff", "--a", p("model"), "--b", p("ve"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["only_in_b_count"], 3);
  EXPECT_EQ(doc["shared_changed_count"], 0);
}

TEST_F(CliTest, Metrics) {
  CliRun r = run_cli({"err", "--baseline", "80", "--model", "90"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["err"], 50.0);

  r = run_cli({"effort", "--batch", "1024", "--seqlen", "128", "--steps", "10000", "--baseline-effort", "2621440000"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["effort"], 1310720000u);
  EXPECT_EQ(doc["ratio"], 0.5);

  r = run_cli({"rescale", "--kind", "pearson", "--value", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rescaled"], 50.0);
  EXPECT_EQ(doc["formula"], "(value + 1) / 2 * 100");
}

TEST_F(CliTest, ErrTable) {
  testing::write_text(dir_ / "t.csv", "language,distance,baseline,model\nes,0.1,80,90\n");
  const CliRun r = run_cli({"err", "--input", p("t.csv"), "--output", p("o.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)[0]["err"], 50.0);
  EXPECT_EQ(read_file(dir_ / "o.csv"), "language,distance,baseline,model,err\nes,0.1,80,90,50\n");
}

TEST_F(CliTest, StatsInspectInit) {
  CliRun r = run_cli({"stats", "--lexicon", p("lex.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["entries"], 6);
  EXPECT_EQ(doc["targets_with_multiple_sources"], 1);
  EXPECT_EQ(doc["skipped_lines"], 1);

  r = run_cli({"inspect", "--model-dir", p("model")});
  ASSERT_EQ(r.code, 0) << r.err;
  doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["vocab_size"], 10);
  EXPECT_EQ(doc["strategy"], "identity");
  EXPECT_TRUE(doc["lexicon_sha256"].is_null());

  r = run_cli({"-q", "init", "--vocab", p("model/vocab.txt"), "--embeddings", p("model/embeddings.safetensors"),
               "--out", p("copy"), "--source-model", "tiny"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_artifact(dir_ / "copy"), load_artifact(dir_ / "model"));
}

TEST_F(CliTest, Vtm) {
  testing::write_text(dir_ / "es.txt", "El gato grande\n\nun perro\n");
  const CliRun r = run_cli({"-q", "vtm", "--lexicon", p("lex.txt"), "--input", p("es.txt"), "--output", p("en.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(dir_ / "en.txt"), "el cat big\n\nun dog\n");
}

TEST(ReportRender, StableAndComplete) {
  TranslationReport report;
  report.targets_collided_existing = 4;
  report.elapsed_seconds = 0.25;
  const std::string a = cli::report_render(report);
  EXPECT_EQ(a, cli::report_render(report));
  EXPECT_NE(a.find("targets_added: 0\n"), std::string::npos);
  EXPECT_NE(a.find("targets_collided_existing: 4\n"), std::string::npos);
  EXPECT_NE(a.find("elapsed: 0.25 s\n"), std::string::npos) << a;
  const auto doc = nlohmann::ordered_json::parse(cli::report_json(report));
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"entries_total", "entries_used", "entries_skipped_all_unk",
                                            "entries_skipped_malformed", "targets_added", "targets_collided_existing",
                                            "targets_with_multiple_sources", "accent_strip_collisions", "elapsed"}));
}

}  // namespace
}  // namespace lexiport
