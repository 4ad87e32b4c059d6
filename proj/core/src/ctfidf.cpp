#include <litmap/topic_model.hpp>

#include <litmap/error.hpp>

#include <algorithm>
#include <cmath>

namespace litmap::topics {

std::vector<TermScores> ctfidf(const std::vector<std::vector<std::size_t>>& classes,
                               const std::vector<textprep::SanitizedDoc>& docs) {
  std::vector<std::map<std::string, double>> class_tf(classes.size());
  std::map<std::string, double> total_tf;
  double total_tokens = 0.0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t d : classes[c]) {
      for (const auto& t : docs.at(d).tokens) {
        class_tf[c][t] += 1.0;
        total_tf[t] += 1.0;
        total_tokens += 1.0;
      }
    }
  }
  if (classes.empty() || total_tokens == 0.0) {
    throw EmptyVocabulary("c-TF-IDF over an empty vocabulary");
  }
  const double avg_tokens = total_tokens / static_cast<double>(classes.size());

  std::vector<TermScores> out(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (class_tf[c].empty()) {
      throw EmptyVocabulary("topic class " + std::to_string(c) + " has no tokens");
    }
    double sum = 0.0;
    for (const auto& [term, tf] : class_tf[c]) {
      const double w = tf * std::log(1.0 + avg_tokens / total_tf.at(term));
      out[c].weights.emplace(term, w);
      sum += w;
    }
    for (const auto& [term, w] : out[c].weights) out[c].term_dist.emplace(term, w / sum);
  }
  return out;
}

std::vector<Keyword> extract_keywords(const TermScores& scores,
                                      std::span<const double> centroid,
                                      const EmbeddingMatrix* word_emb, std::size_t top_k) {
  if (top_k == 0) return {};
  std::vector<std::pair<std::string, double>> ranked(scores.weights.begin(),
                                                     scores.weights.end());
  // Map order already gives the lexicographic tie-break.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  ranked.resize(std::min(ranked.size(), 3 * top_k));
  if (ranked.empty()) return {};
  const double max_w = ranked.front().second;

  bool centroid_usable = word_emb != nullptr && word_emb->dim() == centroid.size();
  if (centroid_usable) {
    centroid_usable = std::any_of(centroid.begin(), centroid.end(),
                                  [](double v) { return v != 0.0; });
  }

  std::vector<Keyword> candidates;
  candidates.reserve(ranked.size());
  for (const auto& [term, w] : ranked) {
    const double norm_w = max_w > 0.0 ? w / max_w : 0.0;
    double score = 0.5 * norm_w;
    if (centroid_usable) {
      if (const auto row = word_emb->find(term)) {
        const auto v = word_emb->row(*row);
        if (std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; })) {
          score += 0.5 * embedding::cosine(v, centroid);
        }
      }
    }
    candidates.push_back({term, score});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Keyword& a, const Keyword& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.token < b.token;
  });
  candidates.resize(std::min(candidates.size(), top_k));
  return candidates;
}

}  // namespace litmap::topics
