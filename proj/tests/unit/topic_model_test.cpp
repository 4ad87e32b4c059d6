#include <litmap/error.hpp>
#include <litmap/topic_model.hpp>

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

namespace litmap::topics {
namespace {

using embedding::EmbeddingMatrix;
using embedding::Kind;

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

EmbeddingMatrix matrix(const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back("p" + std::to_string(i));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return EmbeddingMatrix(ids, rows.front().size(), values, Kind::document);
}

TEST(Reduce, PlanarPointsKeepDistances) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 2.0);
  const std::vector<double> u{1, 2, 0, -1, 0.5}, v{0, 1, 1, 1, -2};
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 40; ++i) {
    const double a = n(rng), b = n(rng);
    std::vector<double> r(5);
    for (int d = 0; d < 5; ++d) r[d] = 3.0 + a * u[d] + b * v[d];
    rows.push_back(r);
  }
  const auto m = matrix(rows);
  const auto red = reduce_dimensions(m, 2).coords;
  ASSERT_EQ(red.dim(), 2u);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.rows(); ++j) {
      EXPECT_NEAR(distance(red.row(i), red.row(j)), distance(m.row(i), m.row(j)), 1e-6);
    }
  }
}

TEST(Reduce, FullRankIsARotation) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> rows(30, std::vector<double>(4));
  for (auto& r : rows) {
    for (auto& x : r) x = n(rng);
  }
  const auto m = matrix(rows);
  const auto red = reduce_dimensions(m, 4);
  EXPECT_FALSE(red.rank_deficient);
  std::vector<double> mean(4, 0.0);
  for (const auto& r : rows) {
    for (int d = 0; d < 4; ++d) mean[d] += r[d] / 30.0;
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double a = 0.0, b = 0.0;
    for (int d = 0; d < 4; ++d) {
      a += (rows[i][d] - mean[d]) * (rows[i][d] - mean[d]);
      b += red.coords.row(i)[d] * red.coords.row(i)[d];
    }
    EXPECT_NEAR(a, b, 1e-9);
  }
}

TEST(Reduce, DuplicatesAndDeterminism) {
  auto rows = std::vector<std::vector<double>>{{1, 2, 3}, {1, 2, 3}, {0, 5, 1}, {4, 0, 2}};
  const auto m = matrix(rows);
  const auto a = reduce_dimensions(m, 2).coords;
  EXPECT_EQ(std::vector<double>(a.row(0).begin(), a.row(0).end()),
            std::vector<double>(a.row(1).begin(), a.row(1).end()));
  EXPECT_EQ(a.values(), reduce_dimensions(m, 2).coords.values());
  EXPECT_THROW(reduce_dimensions(m, 4), InvalidArgument);
}

TEST(Cluster, TwoTightBlobs) {
  std::vector<std::vector<double>> centers{{0, 0}, {10, 0}};
  const auto fx = testing::make_blobs(5, centers, {50, 50}, 0.1);
  const auto res = cluster_density(fx.emb, 10, 10);
  EXPECT_EQ(res.n_clusters, 2u);
  EXPECT_GE(testing::best_match_agreement(fx.truth, res.labels), 0.95);
  EXPECT_EQ(res.stability.size(), 2u);
}

TEST(Cluster, SparseUniformPointsNeverFormSmallClusters) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  std::vector<std::vector<double>> rows(20, std::vector<double>(3));
  for (auto& r : rows) {
    for (auto& x : r) x = u(rng);
  }
  const auto res = cluster_density(matrix(rows), 10, 10);
  EXPECT_LE(res.n_clusters, 1u);
  std::map<int, int> sizes;
  for (int l : res.labels) {
    if (l >= 0) ++sizes[l];
  }
  for (const auto& [l, s] : sizes) EXPECT_GE(s, 10);
}

TEST(Cluster, DuplicateGroupIsOneCluster) {
  std::vector<std::vector<double>> rows(10, std::vector<double>{1.0, 1.0});
  for (int i = 0; i < 12; ++i) rows.push_back({-40.0 + 0.1 * (i % 4), 0.1 * (i / 4)});
  for (int i = 0; i < 10; ++i) rows.push_back({50.0 + i * 7.0, -30.0 * i});
  const auto res = cluster_density(matrix(rows), 10, 10);
  ASSERT_EQ(res.n_clusters, 2u);
  for (int i = 1; i < 10; ++i) EXPECT_EQ(res.labels[i], res.labels[0]);
  EXPECT_NE(res.labels[0], -1);
  for (int i = 10; i < 22; ++i) EXPECT_NE(res.labels[i], res.labels[0]);
}

TEST(Cluster, Errors) {
  const auto m = matrix({{0, 0}, {1, 1}});
  EXPECT_THROW(cluster_density(m, 5, 5), TooFewPoints);
  EXPECT_THROW(cluster_density(m, 1, 1), InvalidArgument);
}

TEST(Ctfidf, ClosedForm) {
  std::vector<textprep::SanitizedDoc> docs{
      {"a", {"t", "t", "t", "t", "t", "u", "u", "u", "u", "u"}},
      {"b", std::vector<std::string>(10, "v")}};
  const auto scores = ctfidf({{0}, {1}}, docs);
  EXPECT_NEAR(scores[0].weights.at("t"), 5.0 * std::log(3.0), 1e-9);
  EXPECT_FALSE(scores[0].weights.contains("v"));
  double sum = 0.0;
  for (const auto& [_, p] : scores[0].term_dist) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_THROW(ctfidf({{0}, {}}, docs), EmptyVocabulary);
}

TEST(Ctfidf, SingleClassEqualTotalsRankByTf) {
  std::vector<textprep::SanitizedDoc> docs{{"a", {"x", "x", "x", "y", "z", "z"}}};
  const auto s = ctfidf({{0}}, docs);
  EXPECT_GT(s[0].weights.at("x"), s[0].weights.at("z"));
  EXPECT_GT(s[0].weights.at("z"), s[0].weights.at("y"));
}

TEST(Keywords, FallbackOrderAndCentroidBlend) {
  TermScores s;
  s.weights = {{"alpha", 3.0}, {"beta", 2.0}, {"gamma", 2.0}, {"delta", 1.0}};
  const std::vector<double> centroid{1.0, 0.0};
  auto kw = extract_keywords(s, centroid, nullptr, 3);
  ASSERT_EQ(kw.size(), 3u);
  EXPECT_EQ(kw[0].token, "alpha");
  EXPECT_EQ(kw[1].token, "beta");
  EXPECT_EQ(kw[2].token, "gamma");

  const EmbeddingMatrix words({"beta", "gamma"}, 2, {0.0, 1.0, 2.0, 0.0}, Kind::word);
  kw = extract_keywords(s, centroid, &words, 3);
  EXPECT_EQ(kw[0].token, "gamma");
  EXPECT_NEAR(kw[0].score, 0.5 * 2.0 / 3.0 + 0.5, 1e-12);
}

TEST(Keywords, MatchBruteForceBlend) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int topic = 0; topic < 3; ++topic) {
    TermScores s;
    std::vector<std::string> ids;
    std::vector<double> vals;
    for (int t = 0; t < 40; ++t) {
      const std::string tok = "k" + std::to_string(t);
      s.weights[tok] = std::abs(u(rng)) + 0.01;
      if (t % 3 != 0) {
        ids.push_back(tok);
        for (int d = 0; d < 4; ++d) vals.push_back(u(rng));
      }
    }
    const EmbeddingMatrix words(ids, 4, vals, Kind::word);
    std::vector<double> centroid(4);
    for (auto& c : centroid) c = u(rng);
    const auto got = extract_keywords(s, centroid, &words, 5);

    std::vector<std::pair<std::string, double>> cand(s.weights.begin(), s.weights.end());
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    cand.resize(15);
    const double wmax = cand.front().second;
    std::vector<std::pair<std::string, double>> blended;
    for (const auto& [tok, w] : cand) {
      double score = 0.5 * w / wmax;
      if (const auto r = words.find(tok)) score += 0.5 * embedding::cosine(words.row(*r), centroid);
      blended.emplace_back(tok, score);
    }
    std::sort(blended.begin(), blended.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    ASSERT_EQ(got.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(got[i].token, blended[i].first);
      EXPECT_NEAR(got[i].score, blended[i].second, 1e-12);
    }
  }
}

TopicModelConfig config(std::size_t n, std::size_t m, Strategy s) {
  TopicModelConfig c;
  c.stage1_min_cluster = n;
  c.stage2_min_cluster = m;
  c.strategy = s;
  c.top_k_keywords = 5;
  return c;
}

TEST(Fit, ThreeBlobsOneStage) {
  std::vector<std::vector<double>> centers(3, std::vector<double>(8, 0.0));
  centers[1][0] = 20.0;
  centers[2][1] = 20.0;
  const auto fx = testing::make_blobs(17, centers, {40, 40, 40}, 0.5);
  const auto fit1 = fit(fx.emb, nullptr, fx.docs, config(30, 15, Strategy::one_stage));
  ASSERT_EQ(fit1.topics.size(), 3u);
  EXPECT_TRUE(fit1.assignment.stage_path.empty());
  for (const auto& t : fit1.topics) {
    ASSERT_FALSE(t.keywords.empty());
    EXPECT_EQ(t.keywords[0].token.substr(0, 1), "w");
  }
  const auto fit2 = fit(fx.emb, nullptr, fx.docs, config(30, 15, Strategy::one_stage));
  EXPECT_EQ(fit1.assignment, fit2.assignment);
  EXPECT_EQ(fit1.topics, fit2.topics);
}

TEST(Fit, NestedBlobSplitsInStageTwo) {
  std::vector<std::vector<double>> centers(3, std::vector<double>(6, 0.0));
  centers[1][0] = 6.0;
  centers[2][1] = 60.0;
  const auto fx = testing::make_blobs(23, centers, {20, 15, 40}, 0.5);
  const auto res = fit(fx.emb, nullptr, fx.docs, config(30, 15, Strategy::two_stage));
  EXPECT_EQ(res.topics.size(), 3u);
  EXPECT_GE(testing::best_match_agreement(fx.truth, res.assignment.labels), 0.95);
  ASSERT_EQ(res.assignment.stage_path.size(), 75u);
  EXPECT_EQ(res.assignment.stage_path[0].stage1, res.assignment.stage_path[20].stage1);
}

TEST(Fit, TwentyNineDocsGiveNoTopics) {
  const auto fx = testing::make_blobs(29, {std::vector<double>(6, 0.0)}, {29}, 0.5);
  const auto res = fit(fx.emb, nullptr, fx.docs, config(30, 15, Strategy::two_stage));
  EXPECT_TRUE(res.topics.empty());
  for (int l : res.assignment.labels) EXPECT_EQ(l, kNoise);
}

TEST(Fit, RebuildMatchesFit) {
  std::vector<std::vector<double>> centers(2, std::vector<double>(5, 0.0));
  centers[1][2] = 25.0;
  const auto fx = testing::make_blobs(31, centers, {35, 45}, 0.5);
  const auto res = fit(fx.emb, nullptr, fx.docs, config(30, 15, Strategy::one_stage));
  const auto rebuilt = rebuild_topics(res.assignment, fx.emb, fx.docs);
  ASSERT_EQ(rebuilt.size(), res.topics.size());
  for (std::size_t t = 0; t < rebuilt.size(); ++t) {
    EXPECT_EQ(rebuilt[t].term_dist, res.topics[t].term_dist);
    EXPECT_EQ(rebuilt[t].centroid, res.topics[t].centroid);
  }
}

TEST(Config, Validation) {
  TopicModelConfig c;
  c.stage1_min_cluster = 10;
  c.stage2_min_cluster = 15;
  EXPECT_THROW(c.validate(), ConfigInvalid);
  EXPECT_THROW(parse_strategy("three_stage"), ConfigInvalid);
}

TEST(TopicFiles, RoundTrip) {
  TopicAssignment a;
  a.ids = {"x", "y, z", "w"};
  a.labels = {0, kNoise, 1};
  EXPECT_EQ(assignment_from_csv(assignment_to_csv(a)), a);

  Topic t;
  t.topic_id = 1;
  t.doc_ids = {"w"};
  t.keywords = {{"flood", 0.75}, {"relief_aid", 0.5}};
  const auto back = topics_from_jsonl(topics_to_jsonl({t}));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].keywords, t.keywords);
  EXPECT_EQ(back[0].doc_ids, t.doc_ids);
}

}  // namespace
}  // namespace litmap::topics
