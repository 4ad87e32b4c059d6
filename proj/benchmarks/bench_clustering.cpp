#include <litmap/topic_model.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using litmap::embedding::EmbeddingMatrix;

EmbeddingMatrix blobs(std::size_t n, std::size_t dim, std::size_t k) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("d" + std::to_string(i));
    const double center = 10.0 * static_cast<double>(i % k);
    for (std::size_t d = 0; d < dim; ++d) values.push_back((d == i % dim ? center : 0.0) + noise(rng));
  }
  return EmbeddingMatrix(std::move(ids), dim, std::move(values), litmap::embedding::Kind::document);
}

void BM_ClusterDensity(benchmark::State& state) {
  const auto points = blobs(static_cast<std::size_t>(state.range(0)), 5, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(litmap::topics::cluster_density(points, 15, 15));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClusterDensity)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

void BM_ReduceDimensions(benchmark::State& state) {
  const auto points = blobs(static_cast<std::size_t>(state.range(0)), 64, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(litmap::topics::reduce_dimensions(points, 5, 42));
  }
}
BENCHMARK(BM_ReduceDimensions)->Arg(256)->Arg(1024);

}  // namespace
