#include <litmap/pipeline.hpp>

#include <litmap/csv.hpp>
#include <litmap/error.hpp>
#include <litmap/hashing.hpp>
#include <litmap/text_util.hpp>
#include <litmap/topic_eval.hpp>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <set>
#include <unordered_map>

namespace litmap::pipeline {

namespace {

namespace art {
constexpr const char* corpus = "ingest/corpus.csv";
constexpr const char* prisma_txt = "ingest/prisma.txt";
constexpr const char* prisma_csv = "ingest/prisma.csv";
constexpr const char* issues = "ingest/issues.csv";
constexpr const char* sanitized = "prep/sanitized.jsonl";
constexpr const char* doc_emb = "embed/documents.emb";
constexpr const char* word_emb = "embed/words.emb";
constexpr const char* assignment = "topics/assignment.csv";
constexpr const char* topics = "topics/topics.jsonl";
constexpr const char* stage_path = "topics/stage_path.csv";
constexpr const char* report = "eval/report.json";
constexpr const char* table = "eval/table.txt";
constexpr const char* significance = "eval/significance.csv";
constexpr const char* top_topics = "eval/top_topics.txt";
constexpr const char* descriptions = "summarize/descriptions.jsonl";
}  // namespace art

// Which stage produces each artifact, for MissingUpstreamArtifact.
const std::map<std::string, std::string>& producers() {
  static const std::map<std::string, std::string> m{
      {art::corpus, "ingest"},     {art::sanitized, "prep"},   {art::doc_emb, "embed"},
      {art::word_emb, "embed"},    {art::assignment, "topics"}, {art::topics, "topics"},
      {art::top_topics, "eval"}};
  return m;
}

// Nearest producer first, so a missing artifact names the stage to run next.
std::vector<std::string> upstream_of(Stage s) {
  switch (s) {
    case Stage::ingest: return {};
    case Stage::prep: return {art::corpus};
    case Stage::embed: return {art::sanitized, art::corpus};
    case Stage::topics: return {art::doc_emb, art::sanitized};
    case Stage::eval: return {art::assignment, art::topics, art::doc_emb, art::sanitized};
    case Stage::summarize: return {art::top_topics, art::assignment, art::corpus};
    case Stage::network: return {art::top_topics, art::assignment, art::corpus};
  }
  return {};
}

class StageContext {
 public:
  StageContext(const RunConfig& config) : config_(config) {}

  fs::path path(const std::string& rel) const { return config_.out_dir / rel; }

  void write(const std::string& rel, std::string_view content) {
    text::write_file(path(rel), content);
    written_.push_back(rel);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  const RunConfig& config_;
  std::vector<std::string> written_;
};

std::vector<textprep::SanitizedDoc> read_sanitized(const StageContext& ctx) {
  return textprep::load_sanitized(ctx.path(art::sanitized));
}

topics::TopicAssignment read_assignment(const StageContext& ctx) {
  return topics::assignment_from_csv(text::read_file(ctx.path(art::assignment)));
}

std::vector<int> read_top_topics(const StageContext& ctx) {
  std::vector<int> ids;
  for (const auto& line : text::split_lines(text::read_file(ctx.path(art::top_topics)))) {
    if (!text::trim(line).empty()) ids.push_back(std::stoi(std::string(text::trim(line))));
  }
  return ids;
}

// ---- stages ------------------------------------------------------------------

void run_ingest(const RunConfig& c, StageContext& ctx) {
  std::vector<ingest::BiblioRecord> all;
  std::string issues = "file,ordinal,reason\n";
  for (const auto& in : c.inputs) {
    auto parsed = ingest::parse_records(in.path, in.format);
    if (parsed.lossy_utf8) spdlog::warn("{}: invalid UTF-8 replaced", in.path.string());
    for (const auto& i : parsed.issues) {
      spdlog::warn("{}: record {}: {}", in.path.string(), i.ordinal, i.reason);
      issues += csv::format_row({in.path.filename().string(), std::to_string(i.ordinal), i.reason});
    }
    for (auto& r : parsed.records) all.push_back(std::move(r));
  }
  auto screened = ingest::screen(std::move(all), c.relevance_terms);
  ctx.write(art::corpus, ingest::write_corpus_csv(screened.kept));
  ctx.write(art::prisma_txt, screened.report.to_key_value());
  ctx.write(art::prisma_csv, screened.report.to_csv());
  ctx.write(art::issues, issues);
}

void run_prep(const RunConfig& c, StageContext& ctx) {
  const auto corpus = ingest::load_corpus(ctx.path(art::corpus));
  const auto stopwords =
      c.stopwords_file ? textprep::StopwordList::load(*c.stopwords_file) : textprep::StopwordList::builtin();
  const auto lemmatizer = c.lemma_file ? textprep::Lemmatizer::parse(text::read_file(*c.lemma_file))
                                       : textprep::Lemmatizer::builtin();
  std::vector<textprep::PrepInput> inputs;
  for (const auto& r : corpus) inputs.push_back({r.record_id, ingest::build_corpus_text(r)});
  const auto docs = textprep::sanitize_corpus(inputs, stopwords, lemmatizer, c.prep);
  ctx.write(art::sanitized, textprep::to_jsonl(docs));
}

void run_embed(const RunConfig& c, StageContext& ctx) {
  const auto docs = read_sanitized(ctx);
  std::set<std::string> vocab;
  for (const auto& d : docs) vocab.insert(d.tokens.begin(), d.tokens.end());

  std::vector<embedding::IdText> word_texts;
  for (const auto& w : vocab) word_texts.push_back({w, w});

  embedding::EmbeddingMatrix doc_emb, word_emb;
  switch (c.embedding.mode) {
    case embedding::ProviderMode::hash: {
      // Bag-of-words stand-in: embed the sanitized tokens, not the raw text.
      std::vector<embedding::IdText> texts;
      for (const auto& d : docs) {
        std::string joined;
        for (const auto& t : d.tokens) joined += (joined.empty() ? "" : " ") + t;
        texts.push_back({d.record_id, std::move(joined)});
      }
      auto r = embedding::hash_embed(texts, c.embedding.hash_dim, embedding::Kind::document);
      for (const auto& id : r.degenerate_ids) spdlog::warn("document {} has no tokens to embed", id);
      doc_emb = std::move(r.matrix);
      word_emb = embedding::hash_embed(word_texts, c.embedding.hash_dim, embedding::Kind::word).matrix;
      break;
    }
    case embedding::ProviderMode::http: {
      const auto corpus = ingest::load_corpus(ctx.path(art::corpus));
      std::unordered_map<std::string, std::string> raw;
      for (const auto& r : corpus) raw.emplace(r.record_id, ingest::build_corpus_text(r));
      std::vector<embedding::IdText> texts;
      for (const auto& d : docs) texts.push_back({d.record_id, raw.at(d.record_id)});
      doc_emb = embedding::fetch_embeddings(texts, c.embedding, embedding::Kind::document);
      word_emb = embedding::fetch_embeddings(word_texts, c.embedding, embedding::Kind::word);
      break;
    }
    case embedding::ProviderMode::file: {
      const auto loaded = embedding::load_embeddings(*c.doc_embeddings_file);
      std::vector<std::size_t> rows;
      for (const auto& d : docs) {
        const auto i = loaded.find(d.record_id);
        if (!i) throw InvalidArgument("embedding file has no vector for " + d.record_id);
        rows.push_back(*i);
      }
      doc_emb = loaded.subset(rows);
      if (c.word_embeddings_file) {
        const auto words = embedding::load_embeddings(*c.word_embeddings_file);
        std::vector<std::size_t> wrows;
        for (const auto& w : vocab) {
          if (const auto i = words.find(w)) wrows.push_back(*i);
        }
        if (!wrows.empty()) word_emb = words.subset(wrows);
      }
      break;
    }
  }
  ctx.write(art::doc_emb, embedding::format_embeddings(doc_emb));
  if (word_emb.rows() > 0) {
    ctx.write(art::word_emb, embedding::format_embeddings(word_emb));
  } else {
    fs::remove(ctx.path(art::word_emb));
    spdlog::warn("no word embeddings; keywords will use c-TF-IDF weights only");
  }
}

void run_topics(const RunConfig& c, StageContext& ctx) {
  const auto docs = read_sanitized(ctx);
  const auto doc_emb = embedding::load_embeddings(ctx.path(art::doc_emb));
  std::optional<embedding::EmbeddingMatrix> word_emb;
  if (fs::is_regular_file(ctx.path(art::word_emb))) {
    word_emb = embedding::load_embeddings(ctx.path(art::word_emb));
  }
  const auto result = topics::fit(doc_emb, word_emb ? &*word_emb : nullptr, docs, c.topics);
  ctx.write(art::assignment, topics::assignment_to_csv(result.assignment));
  ctx.write(art::topics, topics::topics_to_jsonl(result.topics));
  if (c.topics.strategy == topics::Strategy::two_stage) {
    std::string out = "record_id,stage1,stage2,topic_id\n";
    for (std::size_t i = 0; i < result.assignment.ids.size(); ++i) {
      const auto& p = result.assignment.stage_path[i];
      out += csv::format_row({result.assignment.ids[i], std::to_string(p.stage1),
                              std::to_string(p.stage2), std::to_string(result.assignment.labels[i])});
    }
    ctx.write(art::stage_path, out);
  }
  spdlog::info("topics: {} topics over {} documents", result.topics.size(), docs.size());
}

void run_eval(const RunConfig& c, StageContext& ctx) {
  const auto docs = read_sanitized(ctx);
  const auto doc_emb = embedding::load_embeddings(ctx.path(art::doc_emb));
  const auto assignment = read_assignment(ctx);
  const auto stored = topics::topics_from_jsonl(text::read_file(ctx.path(art::topics)));
  auto rebuilt = topics::rebuild_topics(assignment, doc_emb, docs);
  std::map<int, const topics::Topic*> by_id;
  for (const auto& t : stored) by_id[t.topic_id] = &t;
  for (auto& t : rebuilt) {
    const auto it = by_id.find(t.topic_id);
    if (it == by_id.end()) throw FormatError(0, "topics file lacks topic " + std::to_string(t.topic_id));
    t.keywords = it->second->keywords;
  }

  const std::string name = "litmap-" + std::string(topics::to_string(c.topics.strategy));
  const auto report = eval::evaluate_model(name, assignment, rebuilt, docs);
  ctx.write(art::report, eval::report_to_json(report));
  ctx.write(art::table, eval::comparison_table({report}));

  std::string sig = "topic_id,significance\n";
  for (const auto& [id, v] : report.per_topic_significance) {
    sig += csv::format_row({std::to_string(id), nlohmann::json(v).dump()});
  }
  ctx.write(art::significance, sig);

  std::size_t k = c.top_significant;
  if (k > report.per_topic_significance.size()) {
    spdlog::warn("only {} topics; selecting all instead of {}", report.per_topic_significance.size(), k);
    k = report.per_topic_significance.size();
  }
  std::string top;
  for (int id : eval::select_top_significant(report.per_topic_significance, k)) {
    top += std::to_string(id) + "\n";
  }
  ctx.write(art::top_topics, top);
}

void run_summarize(const RunConfig& c, StageContext& ctx) {
  const auto corpus = ingest::load_corpus(ctx.path(art::corpus));
  const auto assignment = read_assignment(ctx);
  const auto labels = assignment.as_map();
  auto backend = summarize::make_backend(c.llm);
  const summarize::SummarizeOptions options{c.llm.max_concurrent, c.llm.max_attempts,
                                            c.llm.backoff_base};
  std::string jsonl;
  for (int topic : read_top_topics(ctx)) {
    std::vector<summarize::Abstract> abstracts;
    for (const auto& r : corpus) {
      const auto it = labels.find(r.record_id);
      if (it != labels.end() && it->second == topic) abstracts.push_back({r.record_id, r.abstract});
    }
    const auto plan = summarize::plan_chunks(topic, abstracts, c.llm.token_budget);
    const auto d = summarize::summarize_topic(plan, abstracts, *backend,
                                              summarize::PromptSet::builtin(), options);
    const std::string stem = "summarize/audit/topic_" + std::to_string(topic);
    ctx.write(stem + ".json", summarize::description_to_json(d));
    ctx.write(stem + ".transcript.jsonl", summarize::transcript_to_jsonl(d));
    jsonl += nlohmann::ordered_json::parse(summarize::description_to_json(d)).dump() + "\n";
  }
  ctx.write(art::descriptions, jsonl);
}

void run_network(const RunConfig& c, StageContext& ctx) {
  const auto corpus = ingest::load_corpus(ctx.path(art::corpus));
  const auto assignment = read_assignment(ctx);
  const auto top = read_top_topics(ctx);
  std::optional<net::AliasMap> aliases;
  if (c.alias_file) aliases = net::AliasMap::load(*c.alias_file);
  const net::AliasMap* alias_ptr = aliases ? &*aliases : nullptr;

  nlohmann::ordered_json summary;
  for (auto kind : {net::EntityKind::country, net::EntityKind::institution, net::EntityKind::author}) {
    const std::string name(net::to_string(kind));
    const auto graph = net::build_graph(corpus, kind, alias_ptr);
    ctx.write("network/" + name + "_rankings.csv", net::rankings_csv(graph.nodes));

    const auto filtered = net::filter_graph(graph, c.min_publications.at(kind));
    nlohmann::ordered_json s{{"nodes", filtered.nodes.size()}, {"edges", filtered.edges.size()},
                             {"min_publications", c.min_publications.at(kind)}};
    std::optional<net::CommunityPartition> partition;
    if (!filtered.nodes.empty()) partition = net::detect_communities(filtered, c.seed);
    if (partition) {
      s["communities"] = partition->n_communities;
      s["modularity"] = partition->modularity;
      std::string rows = "entity,community\n";
      for (const auto& [k, id] : partition->assignment) rows += csv::format_row({k, std::to_string(id)});
      ctx.write("network/" + name + "_communities.csv", rows);
    } else {
      s["communities"] = 0;
      s["modularity"] = nullptr;
    }
    for (auto f : c.graph_formats) {
      const std::string rel = f == net::GraphFormat::edge_csv
                                  ? "network/" + name + "_edges.csv"
                                  : "network/" + name + std::string(net::file_extension(f));
      ctx.write(rel, net::format_graph(filtered, partition ? &*partition : nullptr, f));
    }
    const auto per_topic = net::topicwise(corpus, assignment, top, kind, alias_ptr);
    ctx.write("network/topicwise/" + name + "_topic_counts.csv", net::topic_counts_csv(per_topic));
    summary[name] = std::move(s);
  }
  ctx.write("network/summary.json", summary.dump(2) + "\n");
}

}  // namespace

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> order{Stage::ingest, Stage::prep,      Stage::embed,
                                        Stage::topics, Stage::eval,      Stage::summarize,
                                        Stage::network};
  return order;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::prep: return "prep";
    case Stage::embed: return "embed";
    case Stage::topics: return "topics";
    case Stage::eval: return "eval";
    case Stage::summarize: return "summarize";
    case Stage::network: return "network";
  }
  return "ingest";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : all_stages()) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown stage: " + std::string(name));
}

Runner::Runner(RunConfig config, bool force) : config_(std::move(config)), force_(force) {
  config_.finalize();
  manifest_ = Manifest::load(manifest_path());
}

fs::path Runner::manifest_path() const { return config_.out_dir / "manifest.json"; }

StageRecord Runner::run(Stage stage) {
  const std::string name(to_string(stage));
  StageRecord rec;
  rec.stage = name;
  if (stage == Stage::ingest) {
    for (const auto& in : config_.inputs) rec.inputs[in.path.string()] = hashing::sha256_file(in.path);
  }
  for (const auto& rel : upstream_of(stage)) {
    const fs::path p = config_.out_dir / rel;
    if (!fs::is_regular_file(p)) throw MissingUpstreamArtifact(producers().at(rel));
    rec.inputs[rel] = hashing::sha256_file(p);
  }
  if (stage == Stage::topics && fs::is_regular_file(config_.out_dir / art::word_emb)) {
    rec.inputs[art::word_emb] = hashing::sha256_file(config_.out_dir / art::word_emb);
  }
  rec.config_hash = hashing::sha256_hex(config_.stage_settings(name));

  if (!force_) {
    const auto prev = manifest_.stages.find(name);
    if (prev != manifest_.stages.end() && prev->second.inputs == rec.inputs &&
        prev->second.config_hash == rec.config_hash && !prev->second.outputs.empty()) {
      bool intact = true;
      for (const auto& [rel, hash] : prev->second.outputs) {
        const fs::path p = config_.out_dir / rel;
        if (!fs::is_regular_file(p) || hashing::sha256_file(p) != hash) {
          intact = false;
          break;
        }
      }
      if (intact) {
        rec.outputs = prev->second.outputs;
        rec.skipped = true;
        spdlog::info("{}: inputs unchanged, skipped", name);
        manifest_.stages[name] = rec;
        manifest_.save(manifest_path());
        return rec;
      }
    }
  }

  const auto start = std::chrono::steady_clock::now();
  StageContext ctx(config_);
  switch (stage) {
    case Stage::ingest: run_ingest(config_, ctx); break;
    case Stage::prep: run_prep(config_, ctx); break;
    case Stage::embed: run_embed(config_, ctx); break;
    case Stage::topics: run_topics(config_, ctx); break;
    case Stage::eval: run_eval(config_, ctx); break;
    case Stage::summarize: run_summarize(config_, ctx); break;
    case Stage::network: run_network(config_, ctx); break;
  }
  rec.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (const auto& rel : ctx.written()) rec.outputs[rel] = hashing::sha256_file(config_.out_dir / rel);
  manifest_.stages[name] = rec;
  manifest_.save(manifest_path());
  spdlog::info("{}: {} outputs in {:.0f} ms", name, rec.outputs.size(), rec.duration_ms);
  return rec;
}

std::vector<StageRecord> Runner::run_all() {
  std::vector<StageRecord> out;
  for (Stage s : all_stages()) out.push_back(run(s));
  return out;
}

}  // namespace litmap::pipeline
