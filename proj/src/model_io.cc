#include "lexiport/model_io.h"

#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "lexiport/error.h"

namespace lexiport {
namespace {

using nlohmann::json;

constexpr std::size_t kHeaderLengthBytes = 8;

std::string describe(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64_le(std::string_view bytes) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[static_cast<std::size_t>(i)]);
  return v;
}

std::uint32_t float_bits(float f) { return std::bit_cast<std::uint32_t>(f); }

std::size_t checked_payload_bytes(std::uint64_t rows, std::uint64_t dim) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max() / 4;
  if (dim != 0 && rows > kMax / dim) throw FormatError("tensor shape overflows");
  return static_cast<std::size_t>(rows * dim * 4);
}

std::size_t require_count(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_unsigned()) {
    throw FormatError(std::string("metadata field '") + key + "' must be a non-negative integer");
  }
  return doc[key].get<std::size_t>();
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kIdentity:
      return "identity";
    case Strategy::kLwm:
      return "lwm";
    case Strategy::kVe:
      return "ve";
    case Strategy::kVom:
      return "vom";
  }
  return "identity";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "identity") return Strategy::kIdentity;
  if (name == "lwm") return Strategy::kLwm;
  if (name == "ve") return Strategy::kVe;
  if (name == "vom") return Strategy::kVom;
  throw FormatError("unknown strategy '" + std::string(name) + "'");
}

ModelArtifact::ModelArtifact(Vocabulary vocabulary, EmbeddingMatrix embeddings, ArtifactMetadata metadata)
    : vocabulary_(std::move(vocabulary)), embeddings_(std::move(embeddings)), metadata_(std::move(metadata)) {
  if (vocabulary_.size() != embeddings_.rows()) {
    throw InvariantError("vocabulary/embedding row-count mismatch: " + std::to_string(vocabulary_.size()) + " vs " +
                         std::to_string(embeddings_.rows()));
  }
  if (metadata_.embedding_dim != embeddings_.dim()) {
    throw InvariantError("metadata embedding_dim " + std::to_string(metadata_.embedding_dim) +
                         " does not match matrix dim " + std::to_string(embeddings_.dim()));
  }
  if (metadata_.original_vocab_size > vocabulary_.size()) {
    throw InvariantError("original_vocab_size " + std::to_string(metadata_.original_vocab_size) +
                         " exceeds vocabulary size " + std::to_string(vocabulary_.size()));
  }
}

ModelArtifact ModelArtifact::identity(Vocabulary vocabulary, EmbeddingMatrix embeddings, std::string source_model) {
  ArtifactMetadata meta;
  meta.source_model = std::move(source_model);
  meta.original_vocab_size = vocabulary.size();
  meta.embedding_dim = embeddings.dim();
  return ModelArtifact(std::move(vocabulary), std::move(embeddings), std::move(meta));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + describe(path) + ": " + std::strerror(errno));
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("error reading " + describe(path));
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + describe(path) + " for writing: " + std::strerror(errno));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("error writing " + describe(path));
}

Vocabulary read_vocab(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::vector<std::string> tokens;
  std::unordered_map<std::string_view, std::size_t> first_line;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < bytes.size()) {
    ++line_no;
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) end = bytes.size();
    tokens.emplace_back(bytes, pos, end - pos);
    pos = end + 1;
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) throw FormatError(describe(path) + ": empty line " + std::to_string(i + 1));
    auto [it, inserted] = first_line.emplace(tokens[i], i + 1);
    if (!inserted) {
      throw FormatError(describe(path) + ": duplicate token '" + tokens[i] + "' on lines " +
                        std::to_string(it->second) + " and " + std::to_string(i + 1));
    }
  }
  try {
    return Vocabulary::from_tokens(std::move(tokens));
  } catch (const InvariantError& e) {
    throw FormatError(describe(path) + ": " + e.what());
  }
}

std::string encode_vocab(const Vocabulary& vocab) {
  if (vocab.empty()) throw InvariantError("cannot write an empty vocabulary");
  std::string out;
  for (const std::string& t : vocab.tokens()) {
    out += t;
    out.push_back('\n');
  }
  return out;
}

void write_vocab(const Vocabulary& vocab, const std::filesystem::path& path) { write_file(path, encode_vocab(vocab)); }

std::string encode_embeddings(const EmbeddingMatrix& matrix) {
  const std::size_t payload = checked_payload_bytes(matrix.rows(), matrix.dim());
  const std::string header = R"({"embedding":{"dtype":"F32","shape":[)" + std::to_string(matrix.rows()) + "," +
                             std::to_string(matrix.dim()) + R"(],"data_offsets":[0,)" + std::to_string(payload) +
                             "]}}";
  std::string out;
  out.reserve(kHeaderLengthBytes + header.size() + payload);
  put_u64_le(out, header.size());
  out += header;
  const std::size_t start = out.size();
  out.resize(start + payload);
  char* dst = out.data() + start;
  for (float f : matrix.values()) {
    const std::uint32_t bits = float_bits(f);
    for (int i = 0; i < 4; ++i) *dst++ = static_cast<char>((bits >> (8 * i)) & 0xFF);
  }
  return out;
}

EmbeddingMatrix decode_embeddings(std::string_view bytes) {
  if (bytes.size() < kHeaderLengthBytes) throw FormatError("tensor container shorter than its 8-byte header length");
  const std::uint64_t header_len = get_u64_le(bytes.substr(0, kHeaderLengthBytes));
  if (header_len > bytes.size() - kHeaderLengthBytes) {
    throw FormatError("tensor header length " + std::to_string(header_len) + " exceeds file size");
  }
  json header;
  try {
    header = json::parse(bytes.substr(kHeaderLengthBytes, header_len));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed tensor header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("embedding") || !header["embedding"].is_object()) {
    throw FormatError("tensor header has no 'embedding' entry");
  }
  const json& entry = header["embedding"];
  if (!entry.contains("dtype") || !entry["dtype"].is_string()) throw FormatError("tensor header has no dtype");
  if (const auto dtype = entry["dtype"].get<std::string>(); dtype != "F32") {
    throw FormatError("unsupported dtype '" + dtype + "' (only F32 is supported)");
  }
  const json& shape = entry.value("shape", json());
  if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_unsigned() || !shape[1].is_number_unsigned()) {
    throw FormatError("tensor shape must be [rows, dim]");
  }
  const auto rows = shape[0].get<std::uint64_t>();
  const auto dim = shape[1].get<std::uint64_t>();
  const std::size_t expected = checked_payload_bytes(rows, dim);
  const json& offsets = entry.value("data_offsets", json());
  if (!offsets.is_array() || offsets.size() != 2 || !offsets[0].is_number_unsigned() ||
      !offsets[1].is_number_unsigned() || offsets[0].get<std::uint64_t>() != 0 ||
      offsets[1].get<std::uint64_t>() != expected) {
    throw FormatError("tensor data_offsets must be [0, " + std::to_string(expected) + "]");
  }
  const std::string_view payload = bytes.substr(kHeaderLengthBytes + header_len);
  if (payload.size() != expected) {
    throw FormatError("tensor payload length mismatch: shape [" + std::to_string(rows) + "," + std::to_string(dim) +
                      "] needs " + std::to_string(expected) + " bytes, found " + std::to_string(payload.size()));
  }
  std::vector<float> values(static_cast<std::size_t>(rows * dim));
  const auto* src = reinterpret_cast<const unsigned char*>(payload.data());
  for (std::size_t i = 0; i < values.size(); ++i, src += 4) {
    const std::uint32_t bits = static_cast<std::uint32_t>(src[0]) | (static_cast<std::uint32_t>(src[1]) << 8) |
                               (static_cast<std::uint32_t>(src[2]) << 16) | (static_cast<std::uint32_t>(src[3]) << 24);
    values[i] = std::bit_cast<float>(bits);
  }
  try {
    return EmbeddingMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(dim), std::move(values));
  } catch (const InvariantError& e) {
    throw FormatError(e.what());
  }
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return decode_embeddings(bytes);
  } catch (const FormatError& e) {
    throw FormatError(describe(path) + ": " + e.what());
  }
}

void write_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  write_file(path, encode_embeddings(matrix));
}

std::string encode_metadata(const ArtifactMetadata& metadata) {
  json doc;
  doc["source_model"] = metadata.source_model;
  doc["strategy"] = std::string(to_string(metadata.strategy));
  doc["lexicon_sha256"] = metadata.lexicon_sha256 ? json(*metadata.lexicon_sha256) : json(nullptr);
  doc["original_vocab_size"] = metadata.original_vocab_size;
  doc["embedding_dim"] = metadata.embedding_dim;
  doc["entries_used"] = metadata.entries_used;
  doc["entries_skipped"] = metadata.entries_skipped;
  return doc.dump(2) + "\n";
}

ArtifactMetadata decode_metadata(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed metadata document: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("metadata document must be a JSON object");
  ArtifactMetadata meta;
  if (!doc.contains("source_model") || !doc["source_model"].is_string()) {
    throw FormatError("metadata field 'source_model' must be a string");
  }
  meta.source_model = doc["source_model"].get<std::string>();
  if (!doc.contains("strategy") || !doc["strategy"].is_string()) {
    throw FormatError("metadata field 'strategy' must be a string");
  }
  meta.strategy = parse_strategy(doc["strategy"].get<std::string>());
  if (!doc.contains("lexicon_sha256")) throw FormatError("metadata field 'lexicon_sha256' is missing");
  if (const json& sha = doc["lexicon_sha256"]; sha.is_string()) {
    meta.lexicon_sha256 = sha.get<std::string>();
  } else if (!sha.is_null()) {
    throw FormatError("metadata field 'lexicon_sha256' must be a string or null");
  }
  meta.original_vocab_size = require_count(doc, "original_vocab_size");
  meta.embedding_dim = require_count(doc, "embedding_dim");
  meta.entries_used = require_count(doc, "entries_used");
  meta.entries_skipped = require_count(doc, "entries_skipped");
  return meta;
}

ModelArtifact load_artifact(const std::filesystem::path& dir) {
  const auto vocab_path = dir / kVocabFileName;
  const auto emb_path = dir / kEmbeddingsFileName;
  const auto meta_path = dir / kMetadataFileName;
  for (const auto& p : {vocab_path, emb_path, meta_path}) {
    if (!std::filesystem::exists(p)) throw IoError("artifact file missing: " + describe(p));
  }
  Vocabulary vocab = read_vocab(vocab_path);
  EmbeddingMatrix matrix = read_embeddings(emb_path);
  ArtifactMetadata meta;
  try {
    meta = decode_metadata(read_file(meta_path));
  } catch (const FormatError& e) {
    throw FormatError(describe(meta_path) + ": " + e.what());
  }
  return ModelArtifact(std::move(vocab), std::move(matrix), std::move(meta));
}

void save_artifact(const ModelArtifact& artifact, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + describe(dir) + ": " + ec.message());
  write_vocab(artifact.vocabulary(), dir / kVocabFileName);
  write_embeddings(artifact.embeddings(), dir / kEmbeddingsFileName);
  write_file(dir / kMetadataFileName, encode_metadata(artifact.metadata()));
}

}  // namespace lexiport
