#include <litmap/embedding.hpp>
#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include "fixtures.hpp"
#include "mock_server.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>

namespace litmap::embedding {
namespace {

using nlohmann::json;

TEST(EmbeddingFile, ParsesHeaderAndRows) {
  const auto m = parse_embeddings("#dim=3\tkind=word\na\t1\t2\t3\nb\t4\t5\t6\n");
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.dim(), 3u);
  EXPECT_EQ(m.kind(), Kind::word);
  EXPECT_EQ(m.row(1)[2], 6.0);
  EXPECT_EQ(m.find("b"), 1u);
  EXPECT_FALSE(m.find("c"));
}

TEST(EmbeddingFile, Errors) {
  EXPECT_THROW(parse_embeddings("#dim=3\tkind=document\na\t1\t2\n"), DimensionMismatch);
  EXPECT_THROW(parse_embeddings("#dim=1\tkind=document\na\t1\na\t2\n"), DuplicateId);
  EXPECT_THROW(parse_embeddings("#dim=1\tkind=document\na\tnan\n"), NonFiniteValue);
  EXPECT_THROW(parse_embeddings("dim=1\na\t1\n"), FormatError);
  try {
    parse_embeddings("#dim=2\tkind=document\na\t1\t2\nb\t1\n");
    FAIL();
  } catch (const DimensionMismatch& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.got(), 1u);
  }
}

TEST(EmbeddingFile, RoundTripAtNineDigits) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 3.0);
  std::vector<std::string> ids;
  std::vector<double> values;
  for (int i = 0; i < 20; ++i) {
    ids.push_back("id" + std::to_string(i));
    for (int d = 0; d < 7; ++d) values.push_back(n(rng));
  }
  const EmbeddingMatrix m(ids, 7, values, Kind::document);
  testing::TempDir dir;
  save_embeddings(dir / "m.emb", m);
  const auto back = load_embeddings(dir / "m.emb");
  ASSERT_EQ(back.ids(), m.ids());
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_NEAR(back.values()[i], values[i], std::abs(values[i]) * 1e-8);
  }
  EXPECT_EQ(format_embeddings(back), format_embeddings(m));
}

TEST(Cosine, Examples) {
  const std::vector<double> x{1, 0}, y{0, 1}, a{1, 2}, b{2, 4}, d{1, 1};
  EXPECT_EQ(cosine(x, y), 0.0);
  EXPECT_NEAR(cosine(a, b), 1.0, 1e-12);
  EXPECT_NEAR(cosine(x, d), 0.70710678, 1e-8);
  EXPECT_THROW(cosine(x, std::vector<double>{0, 0}), ZeroVector);
}

TEST(HashEmbed, DeterministicAndDegenerate) {
  const auto r = hash_embed({{"a", "flood relief"}, {"b", "flood relief"}, {"c", ""}}, 64);
  EXPECT_NEAR(cosine(r.matrix.row(0), r.matrix.row(1)), 1.0, 1e-12);
  ASSERT_EQ(r.degenerate_ids, std::vector<std::string>{"c"});
  EXPECT_EQ(r.matrix.row(2)[0], 1.0);
}

TEST(HashEmbed, DisjointTextsNearlyOrthogonal) {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int p = 0; p < 100; ++p) {
    std::string a, b;
    for (int i = 0; i < 20; ++i) {
      a += "a" + std::to_string(rng() % 100000) + " ";
      b += "b" + std::to_string(rng() % 100000) + " ";
    }
    const auto r = hash_embed({{"a", a}, {"b", b}}, 256);
    worst = std::max(worst, std::abs(cosine(r.matrix.row(0), r.matrix.row(1))));
  }
  EXPECT_LT(worst, 0.2);
}

json embed_reply(const json& inputs, std::size_t skip = SIZE_MAX) {
  json vectors = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i == skip) continue;
    const auto text = inputs[i].at("text").get<std::string>();
    vectors.push_back({{"id", inputs[i].at("id")},
                       {"v", {static_cast<double>(text.size()), 1.0, -0.5}}});
  }
  return {{"dim", 3}, {"vectors", vectors}};
}

ProviderConfig http_config(const std::string& url) {
  ProviderConfig c;
  c.mode = ProviderMode::http;
  c.endpoint = url;
  c.batch_size = 2;
  c.backoff_base = std::chrono::milliseconds(1);
  c.timeout = std::chrono::milliseconds(5000);
  return c;
}

std::vector<IdText> five_texts() {
  return {{"t1", "a"}, {"t2", "bb"}, {"t3", "ccc"}, {"t4", "dddd"}, {"t5", "eeeee"}};
}

TEST(FetchEmbeddings, BatchesAndKeepsOrder) {
  std::atomic<int> requests{0};
  std::mutex mu;
  std::string auth;
  testing::MockServer server("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    ++requests;
    {
      std::lock_guard lock(mu);
      auth = req.get_header_value("Authorization");
    }
    res.set_content(embed_reply(json::parse(req.body).at("inputs")).dump(), "application/json");
  });
  ::setenv("LITMAP_TEST_EMBED_TOKEN", "s3cret", 1);
  auto config = http_config(server.url());
  config.auth_token_env = "LITMAP_TEST_EMBED_TOKEN";
  const auto m = fetch_embeddings(five_texts(), config);
  EXPECT_EQ(requests.load(), 3);
  EXPECT_EQ(auth, "Bearer s3cret");
  ASSERT_EQ(m.rows(), 5u);
  EXPECT_EQ(m.ids()[4], "t5");
  EXPECT_EQ(m.row(4)[0], 5.0);
}

TEST(FetchEmbeddings, PartialResponse) {
  testing::MockServer server("/embed", [](const httplib::Request& req, httplib::Response& res) {
    res.set_content(embed_reply(json::parse(req.body).at("inputs"), 0).dump(), "application/json");
  });
  auto config = http_config(server.url());
  config.batch_size = 5;
  try {
    fetch_embeddings(five_texts(), config);
    FAIL();
  } catch (const PartialResponse& e) {
    EXPECT_EQ(e.missing(), std::vector<std::string>{"t1"});
  }
}

TEST(FetchEmbeddings, RetriesTransient503) {
  std::atomic<int> calls{0};
  testing::MockServer server("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    if (calls++ == 0) {
      res.status = 503;
      return;
    }
    res.set_content(embed_reply(json::parse(req.body).at("inputs")).dump(), "application/json");
  });
  auto config = http_config(server.url());
  config.batch_size = 5;
  EXPECT_EQ(fetch_embeddings(five_texts(), config).rows(), 5u);
  EXPECT_EQ(calls.load(), 2);
}

TEST(FetchEmbeddings, PersistentFailureAndBadBodies) {
  testing::MockServer down("/embed", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  auto config = http_config(down.url());
  EXPECT_THROW(fetch_embeddings(five_texts(), config), BadResponse);

  testing::MockServer garbage("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  EXPECT_THROW(fetch_embeddings(five_texts(), http_config(garbage.url())), BadResponse);

  testing::MockServer rejects("/embed", [](const httplib::Request&, httplib::Response& res) { res.status = 413; });
  EXPECT_THROW(fetch_embeddings(five_texts(), http_config(rejects.url())), BadResponse);
}

TEST(FetchEmbeddings, UnreachableEndpoint) {
  auto config = http_config("http://127.0.0.1:1");
  config.max_attempts = 2;
  EXPECT_THROW(fetch_embeddings(five_texts(), config), Unreachable);
}

TEST(ProviderConfig, Validation) {
  ProviderConfig c;
  c.mode = ProviderMode::http;
  EXPECT_THROW(c.validate(), ConfigInvalid);
  c.endpoint = "http://x";
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ConfigInvalid);
  EXPECT_EQ(parse_provider_mode("hash"), ProviderMode::hash);
  EXPECT_EQ(to_string(ProviderMode::file), "file");
}

}  // namespace
}  // namespace litmap::embedding
