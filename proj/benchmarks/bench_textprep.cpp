#include <litmap/textprep.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

namespace tp = litmap::textprep;

std::vector<tp::PrepInput> corpus(std::size_t n) {
  static const std::vector<std::string> words{
      "flood",     "risk",     "the",       "urban",   "resilience", "of",     "communities",
      "early",     "warning",  "systems",   "and",     "climate",    "change", "adaptation",
      "hurricane", "recovery", "modelling", "studies", "were",       "social", "vulnerability"};
  std::mt19937_64 rng(3);
  std::vector<tp::PrepInput> docs;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int w = 0; w < 120; ++w) text += words[rng() % words.size()] + (w % 15 == 14 ? ". " : " ");
    docs.push_back({"r" + std::to_string(i), std::move(text)});
  }
  return docs;
}

void BM_Tokenize(benchmark::State& state) {
  const auto docs = corpus(1);
  for (auto _ : state) benchmark::DoNotOptimize(tp::tokenize(docs[0].text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * docs[0].text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_SanitizeCorpus(benchmark::State& state) {
  const auto docs = corpus(static_cast<std::size_t>(state.range(0)));
  const auto stopwords = tp::StopwordList::builtin();
  const auto lemmatizer = tp::Lemmatizer::builtin();
  for (auto _ : state) benchmark::DoNotOptimize(tp::sanitize_corpus(docs, stopwords, lemmatizer));
}
BENCHMARK(BM_SanitizeCorpus)->Arg(100)->Arg(1000);

}  // namespace
