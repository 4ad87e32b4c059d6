#include <litmap/error.hpp>
#include <litmap/topic_eval.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

namespace litmap::eval {
namespace {

using textprep::SanitizedDoc;

std::vector<std::string> words(const std::string& prefix, int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i <= to; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

TEST(Coherence, AlwaysTogetherIsOne) {
  std::vector<SanitizedDoc> corpus{{"a", {"x", "y"}}, {"b", {"x", "y"}}, {"c", {"z"}}, {"d", {"q"}}};
  const std::vector<std::string> kw{"x", "y"};
  EXPECT_NEAR(coherence(kw, corpus), 1.0, 1e-9);
}

TEST(Coherence, NeverTogetherIsMinusOne) {
  std::vector<SanitizedDoc> corpus{{"a", {"x"}}, {"b", {"y"}}};
  const std::vector<std::string> kw{"x", "y"};
  EXPECT_EQ(coherence(kw, corpus), -1.0);
}

TEST(Coherence, IndependentWordsNearZero) {
  std::mt19937_64 rng(44);
  std::vector<SanitizedDoc> corpus(4000);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    corpus[d].record_id = std::to_string(d);
    for (int w = 0; w < 10; ++w) {
      if (rng() % 2 == 0) corpus[d].tokens.push_back("w" + std::to_string(w));
    }
  }
  EXPECT_NEAR(coherence(words("w", 0, 9), corpus), 0.0, 0.05);
}

TEST(Coherence, Errors) {
  const std::vector<std::string> one{"x"}, two{"x", "y"};
  EXPECT_THROW(coherence(one, {{"a", {"x"}}}), InvalidArgument);
  EXPECT_THROW(coherence(two, {}), InvalidArgument);
}

topics::TopicAssignment assign(const std::vector<SanitizedDoc>& docs, const std::vector<int>& labels) {
  topics::TopicAssignment a;
  for (const auto& d : docs) a.ids.push_back(d.record_id);
  a.labels = labels;
  return a;
}

TEST(Perplexity, PointMassIsOne) {
  std::vector<SanitizedDoc> corpus{{"a", {"x", "x", "x"}}};
  topics::Topic t;
  t.term_dist = {{"x", 1.0}};
  EXPECT_NEAR(perplexity(assign(corpus, {0}), {t}, corpus), 1.0, 1e-9);
}

TEST(Perplexity, UniformIsVocabularySizeAndDoublesWithUnusedWords) {
  const auto vocab = words("v", 0, 49);
  std::vector<SanitizedDoc> corpus;
  std::mt19937_64 rng(8);
  for (int d = 0; d < 10; ++d) {
    SanitizedDoc doc{"d" + std::to_string(d), {}};
    for (int i = 0; i < 12; ++i) doc.tokens.push_back(vocab[rng() % 50]);
    corpus.push_back(doc);
  }
  topics::Topic t;
  for (const auto& w : vocab) t.term_dist[w] = 1.0 / 50;
  const auto a = assign(corpus, std::vector<int>(10, 0));
  EXPECT_NEAR(perplexity(a, {t}, corpus), 50.0, 1e-6);

  topics::Topic wide;
  for (const auto& w : vocab) wide.term_dist[w] = 1.0 / 100;
  for (const auto& w : words("unused", 0, 49)) wide.term_dist[w] = 1.0 / 100;
  EXPECT_NEAR(perplexity(a, {wide}, corpus), 100.0, 1e-6);
}

TEST(Perplexity, NoiseOnlyThrows) {
  std::vector<SanitizedDoc> corpus{{"a", {"x"}}};
  EXPECT_THROW(perplexity(assign(corpus, {-1}), {}, corpus), NoScorableDocs);
}

TEST(Diversity, Examples) {
  const auto a = words("w", 1, 10);
  const auto b = words("u", 1, 10);
  auto c = words("w", 11, 19);
  c.insert(c.begin(), "w1");
  EXPECT_EQ(diversity({a, b}), 1.0);
  EXPECT_EQ(diversity({a, a}), 0.5);
  EXPECT_NEAR(diversity({a, c}), 0.95, 1e-12);
  EXPECT_THROW(diversity({words("w", 1, 9)}), TopicWithFewerThanTenKeywords);
}

TEST(EmbeddingSimilarity, Examples) {
  EXPECT_NEAR(embedding_similarity({{1, 2}, {1, 2}}), 1.0, 1e-12);
  EXPECT_NEAR(embedding_similarity({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), 0.0, 1e-12);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(embedding_similarity({{1, 0}, {0, 1}, {r, r}}), 0.4714, 1e-4);
  EXPECT_THROW(embedding_similarity({{1, 0}}), NotEnoughTopics);
  EXPECT_THROW(embedding_similarity({{1, 0}, {0, 0}}), ZeroVector);
}

TEST(Significance, Examples) {
  EXPECT_NEAR(topic_significance({{"a", 0.25}, {"b", 0.25}, {"c", 0.25}, {"d", 0.25}}, 4), 0.0, 1e-12);
  EXPECT_NEAR(topic_significance({{"a", 1.0}}, 4), 1.38629, 1e-5);
  EXPECT_NEAR(topic_significance({{"a", 0.5}, {"b", 0.5}}, 4), 0.69315, 1e-5);
}

TEST(SelectTop, OrderAndTies) {
  std::map<int, double> sig;
  for (int i = 0; i < 14; ++i) sig[i] = 1.0 + i;
  auto top = select_top_significant(sig, 12);
  ASSERT_EQ(top.size(), 12u);
  EXPECT_EQ(top.front(), 13);
  EXPECT_EQ(top.back(), 2);
  sig[0] = sig[1] = 2.5;
  sig[2] = 0.0;
  top = select_top_significant(sig, 12);
  EXPECT_EQ(top.back(), 0);
  EXPECT_THROW(select_top_significant(sig, 20), NotEnoughTopics);
}

struct ModelFixture {
  std::vector<SanitizedDoc> corpus;
  topics::TopicAssignment assignment;
  std::vector<topics::Topic> topics;
};

ModelFixture three_topic_model() {
  ModelFixture f;
  std::mt19937_64 rng(2);
  for (int t = 0; t < 3; ++t) {
    topics::Topic topic;
    topic.topic_id = t;
    const auto vocab = words("t" + std::to_string(t) + "w", 0, 14);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      topic.term_dist[vocab[i]] = (i + 1.0) / 120.0;
      if (i < 10) topic.keywords.push_back({vocab[i], 1.0});
    }
    topic.centroid = {t == 0 ? 1.0 : 0.2, t == 1 ? 1.0 : 0.1, t == 2 ? 1.0 : 0.3};
    for (int d = 0; d < 8; ++d) {
      SanitizedDoc doc{"t" + std::to_string(t) + "d" + std::to_string(d), {}};
      for (int i = 0; i < 9; ++i) doc.tokens.push_back(vocab[rng() % vocab.size()]);
      f.corpus.push_back(doc);
      f.assignment.ids.push_back(doc.record_id);
      f.assignment.labels.push_back(t);
      topic.doc_ids.push_back(doc.record_id);
    }
    f.topics.push_back(topic);
  }
  SanitizedDoc noise{"noise", {"stray", "t0w1"}};
  f.corpus.push_back(noise);
  f.assignment.ids.push_back("noise");
  f.assignment.labels.push_back(-1);
  return f;
}

TEST(EvaluateModel, MatchesPerMetricOracles) {
  const auto f = three_topic_model();
  const auto r = evaluate_model("m", f.assignment, f.topics, f.corpus);
  EXPECT_EQ(r.n_topics, 3u);

  std::set<std::string> vocab;
  for (const auto& d : f.corpus) vocab.insert(d.tokens.begin(), d.tokens.end());
  for (const auto& t : f.topics) {
    for (const auto& [w, _] : t.term_dist) vocab.insert(w);
  }
  std::vector<std::vector<std::string>> kw, ref_tokens;
  std::vector<std::vector<double>> centroids;
  std::map<int, std::map<std::string, double>> dists;
  for (const auto& t : f.topics) {
    std::vector<std::string> list;
    for (const auto& k : t.keywords) list.push_back(k.token);
    kw.push_back(list);
    centroids.push_back(t.centroid);
    dists[t.topic_id] = t.term_dist;
  }
  std::vector<std::vector<std::string>> all_tokens;
  for (std::size_t i = 0; i < f.corpus.size(); ++i) {
    all_tokens.push_back(f.corpus[i].tokens);
    if (f.assignment.labels[i] >= 0) ref_tokens.push_back(f.corpus[i].tokens);
  }
  double coh = 0.0, sig = 0.0;
  for (std::size_t t = 0; t < kw.size(); ++t) {
    coh += oracle::coherence(kw[t], ref_tokens) / 3.0;
    std::vector<double> full;
    for (const auto& w : vocab) {
      const auto it = f.topics[t].term_dist.find(w);
      full.push_back(it == f.topics[t].term_dist.end() ? 0.0 : it->second);
    }
    sig += oracle::significance(full) / 3.0;
  }
  EXPECT_NEAR(r.avg_coherence, coh, 1e-6);
  EXPECT_NEAR(r.diversity, oracle::diversity(kw), 1e-12);
  ASSERT_TRUE(r.avg_embedding_similarity);
  EXPECT_NEAR(*r.avg_embedding_similarity, oracle::mean_pairwise_cosine(centroids), 1e-12);
  EXPECT_NEAR(r.avg_significance, sig, 1e-9);
  EXPECT_NEAR(r.perplexity, oracle::perplexity(all_tokens, f.assignment.labels, dists, vocab), 1e-9);
}

TEST(EvaluateModel, LabelInvariance) {
  auto f = three_topic_model();
  const auto before = evaluate_model("m", f.assignment, f.topics, f.corpus);
  const std::map<int, int> relabel{{0, 2}, {1, 0}, {2, 1}, {-1, -1}};
  for (auto& l : f.assignment.labels) l = relabel.at(l);
  for (auto& t : f.topics) t.topic_id = relabel.at(t.topic_id);
  std::sort(f.topics.begin(), f.topics.end(), [](const auto& a, const auto& b) { return a.topic_id < b.topic_id; });
  auto after = evaluate_model("m", f.assignment, f.topics, f.corpus);
  EXPECT_EQ(after.avg_coherence, before.avg_coherence);
  EXPECT_EQ(after.perplexity, before.perplexity);
  EXPECT_EQ(after.diversity, before.diversity);
  EXPECT_EQ(after.avg_embedding_similarity, before.avg_embedding_similarity);
  EXPECT_EQ(after.avg_significance, before.avg_significance);
}

TEST(EvaluateModel, SingleTopicHasNullSimilarity) {
  auto f = three_topic_model();
  f.topics.resize(1);
  for (auto& l : f.assignment.labels) {
    if (l > 0) l = -1;
  }
  const auto r = evaluate_model("one", f.assignment, f.topics, f.corpus);
  EXPECT_EQ(r.diversity, 1.0);
  EXPECT_FALSE(r.avg_embedding_similarity);
  const auto json = report_to_json(r);
  EXPECT_NE(json.find("null"), std::string::npos);
  EXPECT_EQ(report_from_json(json), r);
}

TEST(ComparisonTable, MarksBest) {
  const auto f = three_topic_model();
  auto a = evaluate_model("A", f.assignment, f.topics, f.corpus);
  auto b = a;
  b.model_name = "B";
  b.perplexity = a.perplexity * 2;
  const auto table = comparison_table({a, b});
  EXPECT_NE(table.find("Perplexity (down)"), std::string::npos);
  EXPECT_NE(table.find("A"), std::string::npos);
  EXPECT_NE(table.find('*'), std::string::npos);
}

}  // namespace
}  // namespace litmap::eval
