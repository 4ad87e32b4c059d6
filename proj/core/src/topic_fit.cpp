#include <litmap/topic_model.hpp>

#include <litmap/error.hpp>
#include <litmap/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace litmap::topics {

std::string_view to_string(Strategy s) {
  return s == Strategy::one_stage ? "one_stage" : "two_stage";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "one_stage") return Strategy::one_stage;
  if (name == "two_stage") return Strategy::two_stage;
  throw ConfigInvalid("topics.strategy", "expected one_stage or two_stage");
}

void TopicModelConfig::validate() const {
  if (stage2_min_cluster < 2) throw ConfigInvalid("topics.stage2_min_cluster", "must be >= 2");
  if (stage1_min_cluster < stage2_min_cluster) {
    throw ConfigInvalid("topics.stage1_min_cluster", "must be >= stage2_min_cluster");
  }
  if (reduced_dim < 2) throw ConfigInvalid("topics.reduced_dim", "must be >= 2");
  if (top_k_keywords < 1) throw ConfigInvalid("topics.top_k_keywords", "must be >= 1");
  if (min_samples && *min_samples < 1) throw ConfigInvalid("topics.min_samples", "must be >= 1");
}

std::size_t TopicAssignment::n_topics() const {
  int max_label = kNoise;
  for (int l : labels) max_label = std::max(max_label, l);
  return static_cast<std::size_t>(max_label + 1);
}

std::map<std::string, int> TopicAssignment::as_map() const {
  std::map<std::string, int> m;
  for (std::size_t i = 0; i < ids.size(); ++i) m.emplace(ids[i], labels[i]);
  return m;
}

std::vector<double> centroid_of(const EmbeddingMatrix& emb, std::span<const std::size_t> rows) {
  std::vector<double> c(emb.dim(), 0.0);
  for (std::size_t r : rows) {
    const auto v = emb.row(r);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += v[k];
  }
  double norm = 0.0;
  for (double v : c) norm += v * v;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& v : c) v /= norm;
  }
  return c;
}

namespace {

// Per-document row into the sanitized list, in doc_emb order.
std::vector<std::size_t> align_sanitized(const std::vector<std::string>& ids,
                                         const std::vector<textprep::SanitizedDoc>& sanitized) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < sanitized.size(); ++i) index.emplace(sanitized[i].record_id, i);
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = index.find(id);
    if (it == index.end()) throw InvalidArgument("no sanitized document for id " + id);
    out.push_back(it->second);
  }
  return out;
}

std::vector<Topic> build_topics(const std::vector<int>& labels, std::size_t n_topics,
                                const EmbeddingMatrix& doc_emb,
                                const std::vector<std::size_t>& sanitized_row,
                                const std::vector<textprep::SanitizedDoc>& sanitized,
                                std::vector<TermScores>* scores_out = nullptr) {
  std::vector<std::vector<std::size_t>> members(n_topics);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  std::vector<std::vector<std::size_t>> classes(n_topics);
  for (std::size_t t = 0; t < n_topics; ++t) {
    for (std::size_t i : members[t]) classes[t].push_back(sanitized_row[i]);
  }
  std::vector<Topic> topics(n_topics);
  if (n_topics == 0) return topics;
  const auto scores = ctfidf(classes, sanitized);
  for (std::size_t t = 0; t < n_topics; ++t) {
    Topic& topic = topics[t];
    topic.topic_id = static_cast<int>(t);
    for (std::size_t i : members[t]) topic.doc_ids.push_back(doc_emb.ids()[i]);
    topic.term_dist = scores[t].term_dist;
    topic.centroid = centroid_of(doc_emb, members[t]);
  }
  if (scores_out) *scores_out = scores;
  return topics;
}

}  // namespace

FitResult fit(const EmbeddingMatrix& doc_emb, const EmbeddingMatrix* word_emb,
              const std::vector<textprep::SanitizedDoc>& sanitized,
              const TopicModelConfig& config, const Reducer& reducer) {
  config.validate();
  const std::size_t n = doc_emb.rows();
  const auto sanitized_row = align_sanitized(doc_emb.ids(), sanitized);
  const Reducer reduce = reducer ? reducer : Reducer(&reduce_dimensions);

  // Labels for a subset of rows; all noise when the subset is too small.
  auto cluster_rows = [&](const std::vector<std::size_t>& rows, std::size_t min_cluster) {
    ClusterResult res;
    if (rows.size() < min_cluster) {
      res.labels.assign(rows.size(), kNoise);
      return res;
    }
    EmbeddingMatrix sub = doc_emb.subset(rows);
    if (config.reduced_dim < sub.dim()) {
      sub = reduce(sub, config.reduced_dim, config.seed).coords;
    }
    return cluster_density(sub, min_cluster, config.min_samples.value_or(min_cluster));
  };

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  FitResult result;
  TopicAssignment& a = result.assignment;
  a.ids = doc_emb.ids();
  a.labels.assign(n, kNoise);

  const ClusterResult stage1 = cluster_rows(all, config.stage1_min_cluster);
  std::size_t n_topics = 0;
  if (config.strategy == Strategy::one_stage) {
    a.labels = stage1.labels;
    n_topics = stage1.n_clusters;
  } else {
    a.stage_path.assign(n, StagePath{});
    std::vector<std::vector<std::size_t>> members(stage1.n_clusters);
    for (std::size_t i = 0; i < n; ++i) {
      if (stage1.labels[i] != kNoise) members[static_cast<std::size_t>(stage1.labels[i])].push_back(i);
    }
    std::vector<ClusterResult> stage2(stage1.n_clusters);
    parallel_for(stage1.n_clusters, config.jobs, [&](std::size_t c) {
      stage2[c] = cluster_rows(members[c], config.stage2_min_cluster);
      // No sub-cluster: keep the stage-1 cluster whole when it is big enough.
      if (stage2[c].n_clusters == 0 && members[c].size() >= config.stage2_min_cluster) {
        stage2[c].labels.assign(members[c].size(), 0);
        stage2[c].n_clusters = 1;
      }
    });
    for (std::size_t c = 0; c < stage1.n_clusters; ++c) {
      const int base = static_cast<int>(n_topics);
      for (std::size_t j = 0; j < members[c].size(); ++j) {
        const std::size_t row = members[c][j];
        const int sub = stage2[c].labels[j];
        a.stage_path[row] = {static_cast<int>(c), sub};
        a.labels[row] = sub == kNoise ? kNoise : base + sub;
      }
      n_topics += stage2[c].n_clusters;
    }
  }

  std::vector<TermScores> scores;
  result.topics = build_topics(a.labels, n_topics, doc_emb, sanitized_row, sanitized, &scores);
  for (std::size_t t = 0; t < result.topics.size(); ++t) {
    auto& topic = result.topics[t];
    topic.keywords = extract_keywords(scores[t], topic.centroid, word_emb, config.top_k_keywords);
  }
  return result;
}

std::vector<Topic> rebuild_topics(const TopicAssignment& assignment,
                                  const EmbeddingMatrix& doc_emb,
                                  const std::vector<textprep::SanitizedDoc>& sanitized) {
  std::vector<std::size_t> rows;
  rows.reserve(assignment.ids.size());
  for (const auto& id : assignment.ids) {
    const auto r = doc_emb.find(id);
    if (!r) throw InvalidArgument("no document embedding for id " + id);
    rows.push_back(*r);
  }
  const EmbeddingMatrix ordered = doc_emb.subset(rows);
  return build_topics(assignment.labels, assignment.n_topics(), ordered,
                      align_sanitized(ordered.ids(), sanitized), sanitized);
}

}  // namespace litmap::topics
