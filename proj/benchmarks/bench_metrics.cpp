#include <litmap/topic_eval.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

namespace ev = litmap::eval;

std::vector<litmap::textprep::SanitizedDoc> docs(std::size_t n, std::size_t vocab) {
  std::mt19937_64 rng(11);
  std::vector<litmap::textprep::SanitizedDoc> out;
  for (std::size_t i = 0; i < n; ++i) {
    litmap::textprep::SanitizedDoc d{"d" + std::to_string(i), {}};
    for (int t = 0; t < 60; ++t) d.tokens.push_back("w" + std::to_string(rng() % vocab));
    out.push_back(std::move(d));
  }
  return out;
}

void BM_Coherence(benchmark::State& state) {
  const auto corpus = docs(static_cast<std::size_t>(state.range(0)), 400);
  std::vector<std::string> keywords;
  for (int i = 0; i < 10; ++i) keywords.push_back("w" + std::to_string(i));
  for (auto _ : state) benchmark::DoNotOptimize(ev::coherence(keywords, corpus));
}
BENCHMARK(BM_Coherence)->Arg(200)->Arg(2000);

void BM_Similarity(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> centroids(static_cast<std::size_t>(state.range(0)),
                                             std::vector<double>(384));
  for (auto& c : centroids) {
    for (auto& x : c) x = g(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(ev::embedding_similarity(centroids));
}
BENCHMARK(BM_Similarity)->Arg(12)->Arg(100);

void BM_Significance(benchmark::State& state) {
  std::map<std::string, double> dist;
  for (int i = 0; i < state.range(0); ++i) dist["w" + std::to_string(i)] = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ev::topic_significance(dist, 50000));
}
BENCHMARK(BM_Significance)->Arg(1000)->Arg(10000);

}  // namespace
