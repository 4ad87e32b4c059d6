#pragma once

// Embedding interchange: the dense matrix type, the TSV file format, an HTTP
// client for an external embedding service, and a deterministic hash
// embedder used when no model is available.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace litmap::embedding {

enum class Kind { document, word };

std::string_view to_string(Kind kind);
Kind parse_kind(std::string_view name);

/// Row-major n x dim matrix keyed by unique string ids.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  /// Validates the invariants: unique ids, rows*dim values, all finite.
  EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim, std::vector<double> values,
                  Kind kind);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  Kind kind() const noexcept { return kind_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  /// Row index for an id, or nullopt.
  std::optional<std::size_t> find(std::string_view id) const;

  /// Rows selected by index, in the given order.
  EmbeddingMatrix subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> ids_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
  Kind kind_ = Kind::document;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Header `#dim=<D>\tkind=<document|word>`, then `id\tv1\t...\tvD` rows.
/// Throws FormatError, DimensionMismatch, NonFiniteValue, or DuplicateId.
EmbeddingMatrix parse_embeddings(std::string_view content);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

/// Values written with 9 significant digits.
std::string format_embeddings(const EmbeddingMatrix& m);
void save_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m);

/// a.b / (|a||b|), clamped to [-1, 1]. Throws ZeroVector.
double cosine(std::span<const double> a, std::span<const double> b);

struct IdText {
  std::string id;
  std::string text;
};

enum class ProviderMode { file, http, hash };

std::string_view to_string(ProviderMode mode);
ProviderMode parse_provider_mode(std::string_view name);

struct ProviderConfig {
  ProviderMode mode = ProviderMode::hash;
  std::optional<std::string> endpoint;  // base URL, required for http
  std::size_t batch_size = 32;
  std::chrono::milliseconds timeout{30000};
  std::string auth_token_env = "LITMAP_EMBED_TOKEN";
  std::size_t max_concurrent = 4;
  std::size_t max_attempts = 4;  // first try plus three retries
  std::chrono::milliseconds backoff_base{200};
  std::size_t hash_dim = 256;

  /// Throws ConfigInvalid.
  void validate() const;
};

/// POSTs batches to `<endpoint>/embed`; rows come back in request order.
/// Throws Unreachable, BadResponse, or PartialResponse; never returns a
/// partial matrix.
EmbeddingMatrix fetch_embeddings(const std::vector<IdText>& texts, const ProviderConfig& config,
                                 Kind kind = Kind::document);

struct HashEmbedResult {
  EmbeddingMatrix matrix;
  /// Ids whose bucket counts were all zero; their rows were set to e1.
  std::vector<std::string> degenerate_ids;
};

/// Each token is hashed (FNV-1a) to a bucket in [0, dim) with a sign from a
/// second mixed hash; rows are L2-normalized signed bucket counts.
HashEmbedResult hash_embed(const std::vector<IdText>& texts, std::size_t dim,
                           Kind kind = Kind::document);

}  // namespace litmap::embedding
