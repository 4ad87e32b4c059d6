#include <litmap/error.hpp>
#include <litmap/pipeline.hpp>
#include <litmap/text_util.hpp>

#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace litmap::pipeline {
namespace {

namespace fs = std::filesystem;

const fs::path kCorpus = testing::source_root() / "data" / "synthetic_corpus.csv";

std::string field_of(std::string_view toml) {
  try {
    RunConfig::parse(toml);
  } catch (const ConfigInvalid& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(Config, ParsesSections) {
  const auto c = RunConfig::parse(R"(
seed = 7
jobs = 3
out_dir = "o"
[[inputs]]
path = "a.ris"
[[inputs]]
path = "b.nbib"
[topics]
strategy = "two_stage"
stage1_min_cluster = 40
[network]
min_country = 5
formats = ["gexf"]
[llm]
endpoint = "http://localhost:9"
timeout_ms = 1500
)", "/base");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.jobs, 3u);
  EXPECT_EQ(c.out_dir, fs::path("/base/o"));
  ASSERT_EQ(c.inputs.size(), 2u);
  EXPECT_EQ(c.inputs[0].format, ingest::InputFormat::ris);
  EXPECT_EQ(c.inputs[1].format, ingest::InputFormat::medline);
  EXPECT_EQ(c.topics.strategy, topics::Strategy::two_stage);
  EXPECT_EQ(c.topics.stage1_min_cluster, 40u);
  EXPECT_EQ(c.min_publications.at(net::EntityKind::country), 5u);
  EXPECT_EQ(c.min_publications.at(net::EntityKind::author), 4u);
  EXPECT_EQ(c.graph_formats, std::vector<net::GraphFormat>{net::GraphFormat::gexf});
  EXPECT_EQ(c.llm.timeout, std::chrono::milliseconds(1500));
}

TEST(Config, NamedErrors) {
  EXPECT_EQ(field_of("sede = 1\n"), "sede");
  EXPECT_EQ(field_of("[topics]\nstage1_min_cluster = \"thirty\"\n"), "topics.stage1_min_cluster");
  EXPECT_EQ(field_of("[topics]\nstrategy = \"three_stage\"\n"), "topics.strategy");
  EXPECT_EQ(field_of("jobs = 0\n"), "jobs");
  EXPECT_EQ(field_of("[[inputs]]\npath = \"x.pdf\"\n"), "inputs.format");
  EXPECT_EQ(field_of("seed = \n"), "<file>");
  EXPECT_EQ(field_of("[embedding]\nmode = \"magic\"\n"), "embedding.mode");
}

TEST(Config, FinalizeChecksPaths) {
  auto c = RunConfig::parse("[[inputs]]\npath = \"/definitely/missing.csv\"\n");
  EXPECT_THROW(c.finalize(), ConfigInvalid);
  RunConfig empty;
  EXPECT_THROW(empty.finalize(), ConfigInvalid);
}

TEST(Config, StageSettingsChangeWithRelevantFields) {
  RunConfig a;
  RunConfig b = a;
  b.topics.stage1_min_cluster = 99;
  EXPECT_EQ(a.stage_settings("ingest"), b.stage_settings("ingest"));
  EXPECT_NE(a.stage_settings("topics"), b.stage_settings("topics"));
}

TEST(Stages, Names) {
  EXPECT_EQ(all_stages().size(), 7u);
  EXPECT_EQ(all_stages().front(), Stage::ingest);
  EXPECT_EQ(parse_stage("summarize"), Stage::summarize);
  EXPECT_EQ(to_string(Stage::network), "network");
  EXPECT_THROW(parse_stage("deploy"), InvalidArgument);
}

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.inputs = {{kCorpus, ingest::InputFormat::csv}};
  c.embedding.hash_dim = 64;
  c.out_dir = out;
  return c;
}

TEST(Runner, EvalBeforeTopicsNamesTheMissingStage) {
  testing::TempDir dir;
  Runner runner(small_config(dir / "out"));
  try {
    runner.run(Stage::eval);
    FAIL();
  } catch (const MissingUpstreamArtifact& e) {
    EXPECT_EQ(e.stage(), "topics");
  }
}

TEST(Runner, FullRunSkipsOnRerunAndVerifies) {
  testing::TempDir dir;
  const auto out = dir / "out";
  {
    Runner runner(small_config(out));
    const auto records = runner.run_all();
    ASSERT_EQ(records.size(), 7u);
    for (const auto& r : records) EXPECT_FALSE(r.skipped) << r.stage;
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
    EXPECT_TRUE(fs::exists(out / "ingest" / "prisma.txt"));
    EXPECT_TRUE(fs::exists(out / "eval" / "report.json"));
    EXPECT_TRUE(fs::exists(out / "network" / "country.gexf"));
    EXPECT_TRUE(verify(runner.manifest(), out).empty());
    for (const auto& [_, rec] : runner.manifest().stages) {
      for (const auto& [path, hash] : rec.outputs) {
        EXPECT_TRUE(fs::exists(out / path)) << path;
        EXPECT_EQ(hash.size(), 64u);
      }
    }
  }
  {
    Runner again(small_config(out));
    for (const auto& r : again.run_all()) EXPECT_TRUE(r.skipped) << r.stage;
    const auto manifest = Manifest::load(out / "manifest.json");
    EXPECT_EQ(Manifest::from_json(manifest.to_json()).to_json(), manifest.to_json());
  }
  {
    auto changed = small_config(out);
    changed.top_significant = 2;
    Runner runner(changed);
    const auto records = runner.run_all();
    EXPECT_TRUE(records[0].skipped);
    EXPECT_FALSE(records[4].skipped);
  }
  {
    Runner forced(small_config(out), true);
    EXPECT_FALSE(forced.run(Stage::ingest).skipped);
  }
  text::write_file(out / "ingest" / "prisma.txt", "tampered\n");
  const auto issues = verify(Manifest::load(out / "manifest.json"), out);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].problem, "hash mismatch");
  fs::remove(out / "eval" / "table.txt");
  EXPECT_EQ(verify(Manifest::load(out / "manifest.json"), out).size(), 2u);
}

TEST(Runner, TwoStageWritesStagePaths) {
  testing::TempDir dir;
  auto c = small_config(dir / "out");
  c.topics.strategy = topics::Strategy::two_stage;
  Runner runner(c);
  runner.run(Stage::ingest);
  runner.run(Stage::prep);
  runner.run(Stage::embed);
  runner.run(Stage::topics);
  const auto content = text::read_file(dir / "out" / "topics" / "stage_path.csv");
  EXPECT_EQ(content.rfind("record_id,stage1,stage2,topic_id\n", 0), 0u);
  EXPECT_EQ(text::split_lines(text::trim(content)).size(), 187u);
}

}  // namespace
}  // namespace litmap::pipeline
