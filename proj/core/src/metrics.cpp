#include <litmap/topic_eval.hpp>

#include <litmap/embedding.hpp>
#include <litmap/error.hpp>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace litmap::eval {

namespace {

// Sorted-order summation: identical results for any permutation of `values`.
double ordered_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double npmi(double p_i, double p_j, double p_ij) {
  if (p_ij <= 0.0) return -1.0;
  if (p_ij >= 1.0) return 1.0;
  const double joint = p_ij + kSmoothing;
  return std::log(joint / (p_i * p_j)) / -std::log(joint);
}

}  // namespace

double coherence(std::span<const std::string> keywords,
                 const std::vector<textprep::SanitizedDoc>& corpus) {
  const std::size_t k = std::min(keywords.size(), kKeywordsPerTopic);
  if (k < 2) throw InvalidArgument("coherence needs at least two keywords");
  if (corpus.empty()) throw InvalidArgument("coherence needs a non-empty corpus");

  std::unordered_map<std::string_view, std::size_t> slot;
  for (std::size_t i = 0; i < k; ++i) slot.emplace(keywords[i], i);
  std::vector<std::vector<char>> present(k, std::vector<char>(corpus.size(), 0));
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& t : corpus[d].tokens) {
      if (const auto it = slot.find(t); it != slot.end()) present[it->second][d] = 1;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t first = slot.at(keywords[i]);
    if (first != i) present[i] = present[first];
  }

  const double n_docs = static_cast<double>(corpus.size());
  std::vector<double> p(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = static_cast<double>(std::count(present[i].begin(), present[i].end(), 1)) / n_docs;
  }
  std::vector<double> pair_scores;
  pair_scores.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::size_t both = 0;
      for (std::size_t d = 0; d < corpus.size(); ++d) both += present[i][d] && present[j][d];
      pair_scores.push_back(npmi(p[i], p[j], static_cast<double>(both) / n_docs));
    }
  }
  return ordered_mean(std::move(pair_scores));
}

double perplexity(const topics::TopicAssignment& assignment,
                  const std::vector<topics::Topic>& topics,
                  const std::vector<textprep::SanitizedDoc>& corpus) {
  std::unordered_map<int, const topics::Topic*> by_id;
  std::unordered_set<std::string> vocab;
  for (const auto& t : topics) {
    by_id.emplace(t.topic_id, &t);
    for (const auto& [w, _] : t.term_dist) vocab.insert(w);
  }
  for (const auto& d : corpus) vocab.insert(d.tokens.begin(), d.tokens.end());
  const double norm = 1.0 + kSmoothing * static_cast<double>(vocab.size());

  const auto labels = assignment.as_map();
  std::vector<double> doc_log_sums;
  std::size_t n_tokens = 0;
  for (const auto& d : corpus) {
    const auto it = labels.find(d.record_id);
    if (it == labels.end() || it->second == topics::kNoise || d.tokens.empty()) continue;
    const auto topic = by_id.find(it->second);
    if (topic == by_id.end()) throw UnknownTopic(it->second);
    const auto& dist = topic->second->term_dist;
    double s = 0.0;
    for (const auto& w : d.tokens) {
      const auto p = dist.find(w);
      const double pw = p == dist.end() ? 0.0 : p->second;
      s += std::log((pw + kSmoothing) / norm);
    }
    doc_log_sums.push_back(s);
    n_tokens += d.tokens.size();
  }
  if (n_tokens == 0) throw NoScorableDocs();
  std::sort(doc_log_sums.begin(), doc_log_sums.end());
  double total = 0.0;
  for (double s : doc_log_sums) total += s;
  return std::exp(-total / static_cast<double>(n_tokens));
}

double diversity(const std::vector<std::vector<std::string>>& keyword_lists) {
  if (keyword_lists.empty()) throw NotEnoughTopics(0, 1);
  std::set<std::string_view> distinct;
  for (std::size_t t = 0; t < keyword_lists.size(); ++t) {
    const auto& kw = keyword_lists[t];
    if (kw.size() < kKeywordsPerTopic) throw TopicWithFewerThanTenKeywords(static_cast<int>(t));
    distinct.insert(kw.begin(), kw.begin() + kKeywordsPerTopic);
  }
  return static_cast<double>(distinct.size()) /
         static_cast<double>(kKeywordsPerTopic * keyword_lists.size());
}

double embedding_similarity(const std::vector<std::vector<double>>& centroids) {
  if (centroids.size() < 2) throw NotEnoughTopics(centroids.size(), 2);
  std::vector<double> sims;
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    for (std::size_t j = i + 1; j < centroids.size(); ++j) {
      sims.push_back(embedding::cosine(centroids[i], centroids[j]));
    }
  }
  return ordered_mean(std::move(sims));
}

double topic_significance(const std::map<std::string, double>& term_dist,
                          std::size_t vocab_size) {
  if (vocab_size == 0) throw InvalidArgument("vocabulary size must be positive");
  if (term_dist.size() > vocab_size) {
    throw InvalidArgument("term distribution has more words than the vocabulary");
  }
  const double v = static_cast<double>(vocab_size);
  std::vector<double> terms;
  terms.reserve(term_dist.size());
  for (const auto& [_, p] : term_dist) {
    if (p > 0.0) terms.push_back(p * std::log(p * v));
  }
  std::sort(terms.begin(), terms.end());
  double kl = 0.0;
  for (double t : terms) kl += t;
  return kl;
}

ModelReport evaluate_model(const std::string& name, const topics::TopicAssignment& assignment,
                           const std::vector<topics::Topic>& topics,
                           const std::vector<textprep::SanitizedDoc>& corpus) {
  if (topics.empty()) throw NotEnoughTopics(0, 1);
  ModelReport r;
  r.model_name = name;
  r.n_topics = topics.size();

  const auto labels = assignment.as_map();
  std::vector<textprep::SanitizedDoc> reference;
  std::unordered_set<std::string> vocab;
  for (const auto& d : corpus) {
    vocab.insert(d.tokens.begin(), d.tokens.end());
    const auto it = labels.find(d.record_id);
    if (it != labels.end() && it->second != topics::kNoise) reference.push_back(d);
  }
  for (const auto& t : topics) {
    for (const auto& [w, _] : t.term_dist) vocab.insert(w);
  }
  if (reference.empty()) throw NoScorableDocs();

  std::vector<double> coherences, significances;
  std::vector<std::vector<std::string>> keyword_lists;
  std::vector<std::vector<double>> centroids;
  for (const auto& t : topics) {
    std::vector<std::string> kw;
    for (const auto& k : t.keywords) kw.push_back(k.token);
    coherences.push_back(coherence(kw, reference));
    const double sig = topic_significance(t.term_dist, vocab.size());
    significances.push_back(sig);
    r.per_topic_significance[t.topic_id] = sig;
    keyword_lists.push_back(std::move(kw));
    centroids.push_back(t.centroid);
  }
  r.avg_coherence = ordered_mean(std::move(coherences));
  r.avg_significance = ordered_mean(std::move(significances));
  r.perplexity = perplexity(assignment, topics, corpus);
  r.diversity = diversity(keyword_lists);
  if (topics.size() >= 2) {
    r.avg_embedding_similarity = embedding_similarity(centroids);
  } else {
    spdlog::warn("model '{}' has one topic; embedding similarity is undefined", name);
  }
  return r;
}

std::vector<int> select_top_significant(const std::map<int, double>& significance,
                                        std::size_t k) {
  if (significance.size() < k) throw NotEnoughTopics(significance.size(), k);
  std::vector<std::pair<int, double>> ranked(significance.begin(), significance.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<int> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].first);
  return out;
}

}  // namespace litmap::eval
