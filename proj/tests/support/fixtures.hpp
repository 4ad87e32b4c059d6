#pragma once

#include <litmap/embedding.hpp>
#include <litmap/ingest.hpp>
#include <litmap/textprep.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace litmap::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("litmap-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline fs::path source_root() { return fs::path(LITMAP_SOURCE_DIR); }

struct BlobFixture {
  embedding::EmbeddingMatrix emb;
  std::vector<textprep::SanitizedDoc> docs;
  std::vector<int> truth;
};

/// Isotropic Gaussian blobs. Each blob's docs draw tokens from their own
/// 12-word vocabulary so c-TF-IDF has something to rank.
inline BlobFixture make_blobs(std::uint64_t seed, const std::vector<std::vector<double>>& centers,
                              const std::vector<std::size_t>& sizes, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  const std::size_t dim = centers.front().size();
  BlobFixture f;
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t b = 0; b < centers.size(); ++b) {
    for (std::size_t i = 0; i < sizes[b]; ++i) {
      const std::string id = "b" + std::to_string(b) + "_" + std::to_string(i);
      ids.push_back(id);
      for (std::size_t d = 0; d < dim; ++d) values.push_back(centers[b][d] + noise(rng));
      textprep::SanitizedDoc doc{id, {}};
      for (int t = 0; t < 8; ++t) {
        doc.tokens.push_back("w" + std::to_string(b) + "x" + std::to_string(rng() % 12));
      }
      doc.tokens.push_back("shared");
      f.docs.push_back(std::move(doc));
      f.truth.push_back(static_cast<int>(b));
    }
  }
  f.emb = embedding::EmbeddingMatrix(std::move(ids), dim, std::move(values),
                                     embedding::Kind::document);
  return f;
}

/// Random centers in [-1, 1]^dim scaled so every pair is at least
/// `min_separation` apart.
inline std::vector<std::vector<double>> separated_centers(std::mt19937_64& rng, std::size_t k,
                                                          std::size_t dim, double min_separation) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> centers;
  while (centers.size() < k) {
    std::vector<double> c(dim);
    for (auto& x : c) x = u(rng) * min_separation * 2.0;
    bool ok = true;
    for (const auto& o : centers) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < dim; ++i) d2 += (c[i] - o[i]) * (c[i] - o[i]);
      ok = ok && std::sqrt(d2) >= min_separation;
    }
    if (ok) centers.push_back(std::move(c));
  }
  return centers;
}

/// Best label agreement over all one-to-one matchings of predicted clusters
/// to truth labels; noise never matches.
inline double best_match_agreement(const std::vector<int>& truth, const std::vector<int>& pred) {
  int k_true = 0, k_pred = 0;
  for (int t : truth) k_true = std::max(k_true, t + 1);
  for (int p : pred) k_pred = std::max(k_pred, p + 1);
  std::vector<std::vector<std::size_t>> overlap(k_pred, std::vector<std::size_t>(k_true, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (pred[i] >= 0) ++overlap[pred[i]][truth[i]];
  }
  std::vector<int> perm(std::max(k_true, k_pred));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t s = 0;
    for (int p = 0; p < k_pred; ++p) {
      if (perm[p] < k_true) s += overlap[p][perm[p]];
    }
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

inline ingest::AuthorRef author(std::string last, std::string first,
                                std::vector<ingest::Affiliation> affs = {}) {
  ingest::AuthorRef a;
  a.last_name = std::move(last);
  a.first_name = std::move(first);
  a.affiliations = std::move(affs);
  return a;
}

inline ingest::BiblioRecord record(std::string id, std::string title, std::string abstract,
                                   std::vector<ingest::AuthorRef> authors = {}) {
  ingest::BiblioRecord r;
  r.record_id = std::move(id);
  r.title = std::move(title);
  r.abstract = std::move(abstract);
  r.authors = std::move(authors);
  r.year = 2021;
  r.language = "en";
  return r;
}

}  // namespace litmap::testing
