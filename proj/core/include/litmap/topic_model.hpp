#pragma once

// Density-based topic extraction: dimensionality reduction, hierarchical
// density clustering, class-based TF-IDF, and keyword selection.

#include <litmap/embedding.hpp>
#include <litmap/textprep.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace litmap::topics {

using embedding::EmbeddingMatrix;

inline constexpr int kNoise = -1;

enum class Strategy { one_stage, two_stage };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

struct TopicModelConfig {
  std::size_t stage1_min_cluster = 30;
  std::size_t stage2_min_cluster = 15;
  std::size_t reduced_dim = 5;
  /// Defaults to the min cluster size of the stage being clustered.
  std::optional<std::size_t> min_samples;
  std::size_t top_k_keywords = 10;
  Strategy strategy = Strategy::one_stage;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;

  /// Throws ConfigInvalid.
  void validate() const;
};

// ---- reduction -----------------------------------------------------------------

struct Reduction {
  EmbeddingMatrix coords;
  /// True when the data had rank below target_dim and zero columns were padded.
  bool rank_deficient = false;
};

/// Centers the rows and projects them onto the leading target_dim principal
/// axes (descending eigenvalue; each axis signed so its largest-magnitude
/// loading is positive). Deterministic; `seed` is accepted so a stochastic
/// reducer can share the signature.
Reduction reduce_dimensions(const EmbeddingMatrix& emb, std::size_t target_dim,
                            std::uint64_t seed = 0);

/// Reducer hook used by fit(). Defaults to reduce_dimensions.
using Reducer = std::function<Reduction(const EmbeddingMatrix&, std::size_t, std::uint64_t)>;

// ---- clustering ----------------------------------------------------------------

struct ClusterResult {
  /// One label per input row: kNoise or 0..n_clusters-1.
  std::vector<int> labels;
  std::size_t n_clusters = 0;
  /// Stability of each selected cluster, by label.
  std::vector<double> stability;
};

/// Hierarchical density clustering over Euclidean distance. Core distance is
/// the distance to the min_samples-th nearest neighbour counting the point
/// itself. Clusters are read off the condensed tree by excess of mass; the
/// root is never selected. Labels are numbered by first member row. Throws
/// TooFewPoints when rows < min_cluster.
ClusterResult cluster_density(const EmbeddingMatrix& points, std::size_t min_cluster,
                              std::size_t min_samples);

// ---- term scoring --------------------------------------------------------------

struct TermScores {
  /// c-TF-IDF weight per term present in the class.
  std::map<std::string, double> weights;
  /// weights normalized to sum to 1.
  std::map<std::string, double> term_dist;
};

/// W(t,c) = tf(t,c) * ln(1 + A / tf(t)), with A the mean token count per
/// class. `classes` holds document indices into `docs`. Throws
/// EmptyVocabulary if any class has no tokens.
std::vector<TermScores> ctfidf(const std::vector<std::vector<std::size_t>>& classes,
                               const std::vector<textprep::SanitizedDoc>& docs);

struct Keyword {
  std::string token;
  double score = 0.0;
  bool operator==(const Keyword&) const = default;
};

/// Candidates are the 3*top_k highest-weighted terms. Score is
/// 0.5 * (weight / max candidate weight) + 0.5 * cosine(term, centroid); terms
/// missing from word_emb (or a null word_emb / zero centroid) get only the
/// first half. Ties are broken lexicographically.
std::vector<Keyword> extract_keywords(const TermScores& scores,
                                      std::span<const double> centroid,
                                      const EmbeddingMatrix* word_emb, std::size_t top_k);

// ---- model ---------------------------------------------------------------------

struct StagePath {
  int stage1 = kNoise;
  int stage2 = kNoise;
  bool operator==(const StagePath&) const = default;
};

struct TopicAssignment {
  std::vector<std::string> ids;
  std::vector<int> labels;
  /// Filled for two-stage runs only.
  std::vector<StagePath> stage_path;

  std::size_t n_topics() const;
  std::map<std::string, int> as_map() const;
  bool operator==(const TopicAssignment&) const = default;
};

struct Topic {
  int topic_id = 0;
  std::vector<std::string> doc_ids;
  std::map<std::string, double> term_dist;
  std::vector<Keyword> keywords;
  std::vector<double> centroid;
  bool operator==(const Topic&) const = default;
};

struct FitResult {
  TopicAssignment assignment;
  std::vector<Topic> topics;
};

/// Unit-normalized mean of the listed rows; a zero mean stays zero.
std::vector<double> centroid_of(const EmbeddingMatrix& emb, std::span<const std::size_t> rows);

/// doc_emb ids define the document order; every id must have a sanitized
/// doc. word_emb may be null.
FitResult fit(const EmbeddingMatrix& doc_emb, const EmbeddingMatrix* word_emb,
              const std::vector<textprep::SanitizedDoc>& sanitized,
              const TopicModelConfig& config, const Reducer& reducer = {});

/// Rebuilds term distributions and centroids for a stored assignment;
/// keywords are left empty.
std::vector<Topic> rebuild_topics(const TopicAssignment& assignment,
                                  const EmbeddingMatrix& doc_emb,
                                  const std::vector<textprep::SanitizedDoc>& sanitized);

// ---- files ---------------------------------------------------------------------

/// JSONL `{topic_id, size, keywords:[{token,score}], doc_ids:[...]}`.
std::string topics_to_jsonl(const std::vector<Topic>& topics);
/// Keywords and doc ids only; term_dist and centroid are not stored.
std::vector<Topic> topics_from_jsonl(std::string_view content);

/// CSV `record_id,topic_id`.
std::string assignment_to_csv(const TopicAssignment& a);
TopicAssignment assignment_from_csv(std::string_view content);

}  // namespace litmap::topics
