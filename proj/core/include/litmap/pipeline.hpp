#pragma once

// Run configuration, manifest bookkeeping and the staged workflow behind the
// command-line tool.

#include <litmap/embedding.hpp>
#include <litmap/ingest.hpp>
#include <litmap/network.hpp>
#include <litmap/summarizer.hpp>
#include <litmap/textprep.hpp>
#include <litmap/topic_model.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace litmap::pipeline {

namespace fs = std::filesystem;

struct InputSpec {
  fs::path path;
  ingest::InputFormat format = ingest::InputFormat::csv;
};

struct RunConfig {
  std::vector<InputSpec> inputs;
  std::vector<std::string> relevance_terms = ingest::default_relevance_terms();

  textprep::PrepOptions prep;
  std::optional<fs::path> stopwords_file;
  std::optional<fs::path> lemma_file;

  embedding::ProviderConfig embedding;
  /// Precomputed embeddings for provider mode "file".
  std::optional<fs::path> doc_embeddings_file;
  std::optional<fs::path> word_embeddings_file;

  topics::TopicModelConfig topics;
  std::size_t top_significant = 12;

  std::map<net::EntityKind, std::size_t> min_publications{
      {net::EntityKind::country, 20}, {net::EntityKind::institution, 10},
      {net::EntityKind::author, 4}};
  std::vector<net::GraphFormat> graph_formats{net::GraphFormat::gexf, net::GraphFormat::graphml,
                                              net::GraphFormat::edge_csv};
  std::optional<fs::path> alias_file;

  summarize::ChatConfig llm;

  fs::path out_dir = "out";
  std::uint64_t seed = 42;
  std::size_t jobs = 1;

  /// Relative paths in the file resolve against the file's directory.
  /// Throws ConfigInvalid for unknown keys, wrong types or bad values.
  static RunConfig parse(std::string_view toml_text, const fs::path& base_dir = {});
  static RunConfig load(const fs::path& path);

  /// Pushes seed and jobs into the module configs, then checks invariants
  /// and that every referenced input file exists. Throws ConfigInvalid.
  void finalize();

  /// Canonical text of the settings one stage depends on; hashed into the
  /// manifest so a settings change reruns the stage.
  std::string stage_settings(std::string_view stage) const;
};

enum class Stage { ingest, prep, embed, topics, eval, summarize, network };

/// Pipeline order.
const std::vector<Stage>& all_stages();
std::string_view to_string(Stage s);
Stage parse_stage(std::string_view name);

struct StageRecord {
  std::string stage;
  std::map<std::string, std::string> inputs;   // relative path -> sha256
  std::string config_hash;
  std::map<std::string, std::string> outputs;  // relative path -> sha256
  double duration_ms = 0.0;
  bool skipped = false;
};

struct Manifest {
  std::map<std::string, StageRecord> stages;

  std::string to_json() const;
  static Manifest from_json(std::string_view json);
  /// Missing file gives an empty manifest.
  static Manifest load(const fs::path& path);
  void save(const fs::path& path) const;
};

struct VerifyIssue {
  std::string path;
  std::string problem;  // "missing" or "hash mismatch"
};

/// Re-hashes every listed output under `out_dir`.
std::vector<VerifyIssue> verify(const Manifest& manifest, const fs::path& out_dir);

class Runner {
 public:
  Runner(RunConfig config, bool force = false);

  /// Runs one stage, or skips it when its inputs, settings and outputs are
  /// unchanged since the manifest entry. Throws MissingUpstreamArtifact.
  StageRecord run(Stage stage);
  /// Every stage in pipeline order.
  std::vector<StageRecord> run_all();

  const RunConfig& config() const noexcept { return config_; }
  const Manifest& manifest() const noexcept { return manifest_; }
  fs::path manifest_path() const;

 private:
  RunConfig config_;
  bool force_;
  Manifest manifest_;
};

}  // namespace litmap::pipeline
