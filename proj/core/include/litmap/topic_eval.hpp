#pragma once

// Topic-model evaluation: NPMI coherence, perplexity, keyword diversity,
// centroid similarity, and significance (KL divergence from uniform).

#include <litmap/textprep.hpp>
#include <litmap/topic_model.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace litmap::eval {

inline constexpr double kSmoothing = 1e-12;
inline constexpr std::size_t kKeywordsPerTopic = 10;

/// Mean NPMI over all pairs of the first ten keywords, with document-level
/// probabilities from `corpus`. A pair that never co-occurs scores -1; a pair
/// present in every document scores 1. Throws InvalidArgument for fewer
/// than two keywords or an empty corpus.
double coherence(std::span<const std::string> keywords,
                 const std::vector<textprep::SanitizedDoc>& corpus);

/// exp(-(1/N) sum_d sum_{w in d} ln P(w | topic(d))), with
/// P = (term_dist + eps) / (1 + eps * V) over the corpus vocabulary.
/// Noise documents are skipped. Throws NoScorableDocs.
double perplexity(const topics::TopicAssignment& assignment,
                  const std::vector<topics::Topic>& topics,
                  const std::vector<textprep::SanitizedDoc>& corpus);

/// Distinct keywords / (10 * topics), using the first ten keywords of each
/// topic. Throws TopicWithFewerThanTenKeywords.
double diversity(const std::vector<std::vector<std::string>>& keyword_lists);

/// Mean cosine over all unordered centroid pairs. Throws NotEnoughTopics
/// for fewer than two centroids and ZeroVector for a zero centroid.
double embedding_similarity(const std::vector<std::vector<double>>& centroids);

/// KL(p || uniform over vocab_size words), natural log, 0 log 0 = 0.
double topic_significance(const std::map<std::string, double>& term_dist,
                          std::size_t vocab_size);

struct ModelReport {
  std::string model_name;
  std::size_t n_topics = 0;
  double avg_coherence = 0.0;
  double perplexity = 1.0;
  double diversity = 0.0;
  /// Unset for models with fewer than two topics.
  std::optional<double> avg_embedding_similarity;
  double avg_significance = 0.0;
  std::map<int, double> per_topic_significance;

  bool operator==(const ModelReport&) const = default;
};

/// All averages are unweighted means over topics, summed in sorted order so
/// the report does not depend on topic numbering. `corpus` is the full
/// sanitized corpus; noise documents are dropped for coherence and
/// perplexity but count toward the vocabulary.
ModelReport evaluate_model(const std::string& name, const topics::TopicAssignment& assignment,
                           const std::vector<topics::Topic>& topics,
                           const std::vector<textprep::SanitizedDoc>& corpus);

/// Topic ids by significance descending, ties to the smaller id; first k.
/// Throws NotEnoughTopics.
std::vector<int> select_top_significant(const std::map<int, double>& significance,
                                        std::size_t k = 12);

std::string report_to_json(const ModelReport& report);
ModelReport report_from_json(std::string_view json);

/// Metric rows by model columns; the best value in each row is marked with
/// '*'. Coherence, diversity and significance are higher-better; perplexity
/// and embedding similarity lower-better.
std::string comparison_table(const std::vector<ModelReport>& reports);

}  // namespace litmap::eval
