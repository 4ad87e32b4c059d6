#include <litmap/summarizer.hpp>

#include <litmap/error.hpp>
#include <litmap/hashing.hpp>
#include <litmap/parallel.hpp>
#include <litmap/resources.hpp>
#include <litmap/text_util.hpp>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <thread>
#include <unordered_map>

namespace litmap::summarize {

using nlohmann::ordered_json;

PromptSet PromptSet::builtin() {
  return {std::string(resources::get("chunk_v1.txt")),
          std::string(resources::get("reduce_v1.txt"))};
}

std::string PromptSet::fingerprint() const {
  std::string joined = chunk_template;
  joined.push_back('\0');
  joined += reduce_template;
  return hashing::hex64(hashing::fnv1a64(joined));
}

namespace {

struct StepResult {
  std::string reply;
  std::vector<Exchange> exchanges;
};

StepResult run_step(ChatBackend& backend, const std::string& step, int error_index,
                    std::vector<ChatMessage> request, const SummarizeOptions& options) {
  StepResult out;
  std::string last_error;
  for (std::size_t attempt = 1; attempt <= options.max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(options.backoff_base * (1LL << (attempt - 2)));
    Exchange ex{step, attempt, request, {}, {}};
    try {
      ex.response = backend.complete(request);
      out.exchanges.push_back(std::move(ex));
      out.reply = out.exchanges.back().response;
      return out;
    } catch (const std::exception& e) {
      last_error = e.what();
      ex.error = last_error;
      out.exchanges.push_back(std::move(ex));
      spdlog::warn("{} attempt {}/{} failed: {}", step, attempt, options.max_attempts, last_error);
    }
  }
  throw EndpointError(error_index, last_error);
}

}  // namespace

TopicDescription summarize_topic(const ChunkPlan& plan, const std::vector<Abstract>& abstracts,
                                 ChatBackend& backend, const PromptSet& prompts,
                                 const SummarizeOptions& options) {
  if (plan.chunks.empty()) throw EmptyTopic();
  if (options.max_attempts == 0) throw InvalidArgument("max_attempts must be at least 1");
  std::unordered_map<std::string_view, std::string_view> by_id;
  for (const auto& a : abstracts) by_id.emplace(a.id, a.text);

  std::vector<std::string> payloads;
  for (const auto& chunk : plan.chunks) {
    std::string payload;
    for (const auto& id : chunk) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw InvalidArgument("chunk plan names unknown abstract " + id);
      if (!payload.empty()) payload += "\n\n";
      payload += text::collapse_whitespace(it->second);
    }
    payloads.push_back(std::move(payload));
  }

  std::vector<StepResult> mapped(payloads.size());
  parallel_for(payloads.size(), options.max_concurrent, [&](std::size_t i) {
    mapped[i] = run_step(backend, "chunk-" + std::to_string(i), static_cast<int>(i),
                         {{"system", prompts.chunk_template}, {"user", payloads[i]}}, options);
  });

  TopicDescription d;
  d.topic_id = plan.topic_id;
  d.model_name = backend.model_name();
  d.prompt_fingerprint = prompts.fingerprint();
  std::string joined;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    std::string summary(text::trim(mapped[i].reply));
    if (summary.empty()) {
      throw MalformedCompletion("empty summary for chunk " + std::to_string(i));
    }
    if (!joined.empty()) joined += "\n\n";
    joined += summary;
    d.chunk_summaries.push_back(std::move(summary));
    for (auto& ex : mapped[i].exchanges) d.transcript.push_back(std::move(ex));
  }

  auto reduced = run_step(backend, "reduce", -1,
                          {{"system", prompts.reduce_template}, {"user", joined}}, options);
  for (auto& ex : reduced.exchanges) d.transcript.push_back(std::move(ex));

  const std::string_view reply = text::trim(reduced.reply);
  const auto nl = reply.find('\n');
  d.title = std::string(text::trim(reply.substr(0, nl)));
  d.summary = nl == std::string_view::npos ? "" : std::string(text::trim(reply.substr(nl + 1)));
  if (d.title.empty() || d.summary.empty()) {
    throw MalformedCompletion("reduce reply needs a title line followed by a summary");
  }
  return d;
}

std::string description_to_json(const TopicDescription& d) {
  ordered_json j;
  j["topic_id"] = d.topic_id;
  j["title"] = d.title;
  j["summary"] = d.summary;
  j["chunk_summaries"] = d.chunk_summaries;
  j["model_name"] = d.model_name;
  j["prompt_fingerprint"] = d.prompt_fingerprint;
  return j.dump(2) + "\n";
}

std::string transcript_to_jsonl(const TopicDescription& d) {
  std::string out;
  for (const auto& ex : d.transcript) {
    ordered_json j;
    j["topic_id"] = d.topic_id;
    j["step"] = ex.step;
    j["attempt"] = ex.attempt;
    ordered_json msgs = ordered_json::array();
    for (const auto& m : ex.request) msgs.push_back({{"role", m.role}, {"content", m.content}});
    j["request"] = std::move(msgs);
    if (ex.error.empty()) {
      j["response"] = ex.response;
    } else {
      j["error"] = ex.error;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_audit(const std::filesystem::path& dir, const TopicDescription& d) {
  const std::string stem = "topic_" + std::to_string(d.topic_id);
  text::write_file(dir / (stem + ".json"), description_to_json(d));
  text::write_file(dir / (stem + ".transcript.jsonl"), transcript_to_jsonl(d));
}

}  // namespace litmap::summarize
