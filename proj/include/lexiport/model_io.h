#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lexiport/embedding_matrix.h"
#include "lexiport/vocabulary.h"

namespace lexiport {

enum class Strategy { kIdentity, kLwm, kVe, kVom };

std::string_view to_string(Strategy strategy);
// Accepts "identity", "lwm", "ve", "vom"; throws FormatError otherwise.
Strategy parse_strategy(std::string_view name);

struct ArtifactMetadata {
  std::string source_model;
  Strategy strategy = Strategy::kIdentity;
  std::optional<std::string> lexicon_sha256;
  std::size_t original_vocab_size = 0;
  std::size_t embedding_dim = 0;
  std::size_t entries_used = 0;
  std::size_t entries_skipped = 0;

  friend bool operator==(const ArtifactMetadata&, const ArtifactMetadata&) = default;
};

// Vocabulary + embedding layer + provenance. The constructor enforces
// vocabulary.size() == embeddings.rows(), embedding_dim == embeddings.dim()
// and original_vocab_size <= vocabulary.size().
class ModelArtifact {
 public:
  ModelArtifact(Vocabulary vocabulary, EmbeddingMatrix embeddings, ArtifactMetadata metadata);

  // Wraps a raw vocabulary/matrix pair as an untranslated artifact.
  static ModelArtifact identity(Vocabulary vocabulary, EmbeddingMatrix embeddings, std::string source_model);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  const EmbeddingMatrix& embeddings() const { return embeddings_; }
  const ArtifactMetadata& metadata() const { return metadata_; }

  friend bool operator==(const ModelArtifact&, const ModelArtifact&) = default;

 private:
  Vocabulary vocabulary_;
  EmbeddingMatrix embeddings_;
  ArtifactMetadata metadata_;
};

inline constexpr std::string_view kVocabFileName = "vocab.txt";
inline constexpr std::string_view kEmbeddingsFileName = "embeddings.safetensors";
inline constexpr std::string_view kMetadataFileName = "artifact.json";

// One token per line, LF endings, single trailing LF.
Vocabulary read_vocab(const std::filesystem::path& path);
void write_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
std::string encode_vocab(const Vocabulary& vocab);

// Tensor container: u64 LE header length, JSON header, raw LE binary32 payload.
EmbeddingMatrix read_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);
std::string encode_embeddings(const EmbeddingMatrix& matrix);
EmbeddingMatrix decode_embeddings(std::string_view bytes);

std::string encode_metadata(const ArtifactMetadata& metadata);
ArtifactMetadata decode_metadata(std::string_view json_text);

ModelArtifact load_artifact(const std::filesystem::path& dir);
void save_artifact(const ModelArtifact& artifact, const std::filesystem::path& dir);

// Shared helpers for whole-file I/O with path context in error messages.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace lexiport
