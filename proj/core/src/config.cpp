#include <litmap/pipeline.hpp>

#include <litmap/error.hpp>
#include <litmap/hashing.hpp>
#include <litmap/text_util.hpp>

#define TOML_HEADER_ONLY 1
#include <toml.hpp>

#include <set>
#include <sstream>

namespace litmap::pipeline {

namespace {

// Typed access to one TOML table that remembers which keys were read, so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  std::string field(std::string_view key) const {
    return name_.empty() ? std::string(key) : name_ + "." + std::string(key);
  }

  const toml::node* get(std::string_view key) {
    seen_.insert(std::string(key));
    return table_ ? table_->get(key) : nullptr;
  }

  std::optional<std::string> str(std::string_view key) {
    const auto* n = get(key);
    if (!n) return std::nullopt;
    if (!n->is_string()) throw ConfigInvalid(field(key), "expected a string");
    return n->as_string()->get();
  }

  std::optional<std::int64_t> integer(std::string_view key) {
    const auto* n = get(key);
    if (!n) return std::nullopt;
    if (!n->is_integer()) throw ConfigInvalid(field(key), "expected an integer");
    return n->as_integer()->get();
  }

  std::optional<std::size_t> count(std::string_view key, std::int64_t min = 0) {
    const auto v = integer(key);
    if (!v) return std::nullopt;
    if (*v < min) throw ConfigInvalid(field(key), "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(*v);
  }

  std::optional<double> real(std::string_view key) {
    const auto* n = get(key);
    if (!n) return std::nullopt;
    if (n->is_integer()) return static_cast<double>(n->as_integer()->get());
    if (!n->is_floating_point()) throw ConfigInvalid(field(key), "expected a number");
    return n->as_floating_point()->get();
  }

  std::optional<std::vector<std::string>> strings(std::string_view key) {
    const auto* n = get(key);
    if (!n) return std::nullopt;
    if (!n->is_array()) throw ConfigInvalid(field(key), "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : *n->as_array()) {
      if (!e.is_string()) throw ConfigInvalid(field(key), "expected an array of strings");
      out.push_back(e.as_string()->get());
    }
    return out;
  }

  void reject_unknown() const {
    if (!table_) return;
    for (const auto& [k, _] : *table_) {
      if (!seen_.count(std::string(k.str()))) throw ConfigInvalid(field(k.str()), "unknown key");
    }
  }

 private:
  const toml::table* table_;
  std::string name_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ingest::InputFormat infer_format(const fs::path& p) {
  const std::string ext = text::to_lower(p.extension().string());
  if (ext == ".ris") return ingest::InputFormat::ris;
  if (ext == ".nbib" || ext == ".medline" || ext == ".txt") return ingest::InputFormat::medline;
  if (ext == ".csv") return ingest::InputFormat::csv;
  throw ConfigInvalid("inputs.format", "cannot infer format of " + p.string());
}

template <typename Fn>
auto as_config_error(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const Error& e) {
    throw ConfigInvalid(field, e.what());
  }
}

}  // namespace

RunConfig RunConfig::parse(std::string_view toml_text, const fs::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line;
    throw ConfigInvalid("<file>", msg.str());
  }

  RunConfig c;
  Section top(&root, "");
  if (auto v = top.count("seed")) c.seed = *v;
  if (auto v = top.count("jobs", 1)) c.jobs = *v;
  if (auto v = top.str("out_dir")) c.out_dir = resolve(base_dir, *v);

  if (const auto* inputs = top.get("inputs")) {
    if (!inputs->is_array_of_tables()) throw ConfigInvalid("inputs", "expected [[inputs]] tables");
    for (const auto& node : *inputs->as_array()) {
      Section s(node.as_table(), "inputs");
      const auto path = s.str("path");
      if (!path) throw ConfigInvalid("inputs.path", "is required");
      InputSpec spec{resolve(base_dir, *path), {}};
      const auto format = s.str("format");
      spec.format = format ? as_config_error("inputs.format",
                                             [&] { return ingest::parse_input_format(*format); })
                           : infer_format(spec.path);
      s.reject_unknown();
      c.inputs.push_back(std::move(spec));
    }
  }

  const auto section = [&](const char* name) {
    const auto* n = top.get(name);
    if (n && !n->is_table()) throw ConfigInvalid(name, "expected a table");
    return Section(n ? n->as_table() : nullptr, name);
  };

  {
    auto s = section("ingest");
    if (auto v = s.strings("relevance_terms")) c.relevance_terms = *v;
    s.reject_unknown();
  }
  {
    auto s = section("prep");
    if (auto v = s.count("bigram_min_count", 1)) c.prep.bigram_min_count = *v;
    if (auto v = s.real("bigram_threshold")) c.prep.bigram_threshold = *v;
    if (auto v = s.str("stopwords_file")) c.stopwords_file = resolve(base_dir, *v);
    if (auto v = s.str("lemma_file")) c.lemma_file = resolve(base_dir, *v);
    s.reject_unknown();
  }
  {
    auto s = section("embedding");
    if (auto v = s.str("mode")) {
      c.embedding.mode =
          as_config_error("embedding.mode", [&] { return embedding::parse_provider_mode(*v); });
    }
    if (auto v = s.str("endpoint")) c.embedding.endpoint = *v;
    if (auto v = s.count("batch_size", 1)) c.embedding.batch_size = *v;
    if (auto v = s.count("timeout_ms", 1)) c.embedding.timeout = std::chrono::milliseconds(*v);
    if (auto v = s.str("token_env")) c.embedding.auth_token_env = *v;
    if (auto v = s.count("max_concurrent", 1)) c.embedding.max_concurrent = *v;
    if (auto v = s.count("max_attempts", 1)) c.embedding.max_attempts = *v;
    if (auto v = s.count("backoff_ms")) c.embedding.backoff_base = std::chrono::milliseconds(*v);
    if (auto v = s.count("hash_dim", 2)) c.embedding.hash_dim = *v;
    if (auto v = s.str("doc_file")) c.doc_embeddings_file = resolve(base_dir, *v);
    if (auto v = s.str("word_file")) c.word_embeddings_file = resolve(base_dir, *v);
    s.reject_unknown();
  }
  {
    auto s = section("topics");
    if (auto v = s.str("strategy")) {
      c.topics.strategy = as_config_error("topics.strategy", [&] { return topics::parse_strategy(*v); });
    }
    if (auto v = s.count("stage1_min_cluster", 2)) c.topics.stage1_min_cluster = *v;
    if (auto v = s.count("stage2_min_cluster", 2)) c.topics.stage2_min_cluster = *v;
    if (auto v = s.count("reduced_dim", 1)) c.topics.reduced_dim = *v;
    if (auto v = s.count("min_samples", 1)) c.topics.min_samples = *v;
    if (auto v = s.count("top_k_keywords", 1)) c.topics.top_k_keywords = *v;
    s.reject_unknown();
  }
  {
    auto s = section("eval");
    if (auto v = s.count("top_significant", 1)) c.top_significant = *v;
    s.reject_unknown();
  }
  {
    auto s = section("network");
    if (auto v = s.count("min_country")) c.min_publications[net::EntityKind::country] = *v;
    if (auto v = s.count("min_institution")) c.min_publications[net::EntityKind::institution] = *v;
    if (auto v = s.count("min_author")) c.min_publications[net::EntityKind::author] = *v;
    if (auto v = s.strings("formats")) {
      c.graph_formats.clear();
      for (const auto& f : *v) {
        c.graph_formats.push_back(
            as_config_error("network.formats", [&] { return net::parse_graph_format(f); }));
      }
    }
    if (auto v = s.str("alias_file")) c.alias_file = resolve(base_dir, *v);
    s.reject_unknown();
  }
  {
    auto s = section("llm");
    if (auto v = s.str("endpoint")) c.llm.endpoint = *v;
    if (auto v = s.str("model")) c.llm.model = *v;
    if (auto v = s.str("api_key_env")) c.llm.api_key_env = *v;
    if (auto v = s.count("timeout_ms", 1)) c.llm.timeout = std::chrono::milliseconds(*v);
    if (auto v = s.count("max_attempts", 1)) c.llm.max_attempts = *v;
    if (auto v = s.count("backoff_ms")) c.llm.backoff_base = std::chrono::milliseconds(*v);
    if (auto v = s.count("max_concurrent", 1)) c.llm.max_concurrent = *v;
    if (auto v = s.count("token_budget", 1)) c.llm.token_budget = *v;
    s.reject_unknown();
  }
  top.reject_unknown();
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  return parse(text::read_file(path), path.parent_path());
}

void RunConfig::finalize() {
  topics.seed = seed;
  topics.jobs = jobs;
  embedding.max_concurrent = std::min(embedding.max_concurrent, std::max<std::size_t>(jobs, 1));
  llm.max_concurrent = std::min(llm.max_concurrent, std::max<std::size_t>(jobs, 1));

  if (inputs.empty()) throw ConfigInvalid("inputs", "at least one input file is required");
  for (const auto& in : inputs) {
    if (!fs::is_regular_file(in.path)) throw ConfigInvalid("inputs.path", "not found: " + in.path.string());
  }
  if (relevance_terms.empty()) throw ConfigInvalid("ingest.relevance_terms", "must not be empty");
  if (!(prep.bigram_threshold > 0.0)) throw ConfigInvalid("prep.bigram_threshold", "must be positive");
  for (const auto& [field, p] : {std::pair{"prep.stopwords_file", &stopwords_file},
                                 std::pair{"prep.lemma_file", &lemma_file},
                                 std::pair{"embedding.doc_file", &doc_embeddings_file},
                                 std::pair{"embedding.word_file", &word_embeddings_file},
                                 std::pair{"network.alias_file", &alias_file}}) {
    if (*p && !fs::is_regular_file(**p)) throw ConfigInvalid(field, "not found: " + (*p)->string());
  }
  embedding.validate();
  if (embedding.mode == embedding::ProviderMode::file && !doc_embeddings_file) {
    throw ConfigInvalid("embedding.doc_file", "required when mode = \"file\"");
  }
  topics.validate();
  if (top_significant == 0) throw ConfigInvalid("eval.top_significant", "must be positive");
  if (graph_formats.empty()) throw ConfigInvalid("network.formats", "must not be empty");
  llm.validate();
}

std::string RunConfig::stage_settings(std::string_view stage) const {
  std::ostringstream o;
  o << "stage=" << stage << '\n';
  const auto opt_path = [](const std::optional<fs::path>& p) {
    return p ? hashing::sha256_file(*p) : std::string("-");
  };
  if (stage == "ingest") {
    for (const auto& in : inputs) o << "input_format=" << static_cast<int>(in.format) << '\n';
    for (const auto& t : relevance_terms) o << "term=" << t << '\n';
  } else if (stage == "prep") {
    o << "bigram_min_count=" << prep.bigram_min_count << "\nbigram_threshold=" << prep.bigram_threshold
      << "\nstopwords=" << opt_path(stopwords_file) << "\nlemmas=" << opt_path(lemma_file) << '\n';
  } else if (stage == "embed") {
    o << "mode=" << embedding::to_string(embedding.mode) << "\nendpoint=" << embedding.endpoint.value_or("-")
      << "\nhash_dim=" << embedding.hash_dim << "\ndoc_file=" << opt_path(doc_embeddings_file)
      << "\nword_file=" << opt_path(word_embeddings_file) << '\n';
  } else if (stage == "topics") {
    o << "strategy=" << topics::to_string(topics.strategy) << "\nstage1=" << topics.stage1_min_cluster
      << "\nstage2=" << topics.stage2_min_cluster << "\nreduced_dim=" << topics.reduced_dim
      << "\nmin_samples=" << (topics.min_samples ? std::to_string(*topics.min_samples) : "-")
      << "\ntop_k=" << topics.top_k_keywords << "\nseed=" << seed << '\n';
  } else if (stage == "eval") {
    o << "top_significant=" << top_significant << '\n';
  } else if (stage == "summarize") {
    o << "endpoint=" << llm.endpoint << "\nmodel=" << llm.model << "\nbudget=" << llm.token_budget
      << "\nprompts=" << summarize::PromptSet::builtin().fingerprint()
      << "\ntop_significant=" << top_significant << '\n';
  } else if (stage == "network") {
    for (const auto& [k, v] : min_publications) o << "min_" << net::to_string(k) << '=' << v << '\n';
    for (auto f : graph_formats) o << "format=" << net::file_extension(f) << '\n';
    o << "aliases=" << opt_path(alias_file) << "\ntop_significant=" << top_significant
      << "\nseed=" << seed << '\n';
  } else {
    throw InvalidArgument("unknown stage " + std::string(stage));
  }
  return o.str();
}

}  // namespace litmap::pipeline
