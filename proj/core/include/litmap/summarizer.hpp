#pragma once

// Map-reduce topic descriptions through a chat-completion endpoint, and the
// two-rater evaluation arithmetic (comprehensiveness, Cohen's kappa).

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace litmap::summarize {

struct Abstract {
  std::string id;
  std::string text;
};

/// ceil(code points / 4).
std::size_t estimate_tokens(std::string_view text);

inline constexpr std::size_t kDefaultTokenBudget = 3000;

struct ChunkPlan {
  int topic_id = 0;
  std::vector<std::vector<std::string>> chunks;
  std::size_t token_budget = kDefaultTokenBudget;
  /// Indices of single-abstract chunks that exceed the budget.
  std::vector<std::size_t> over_budget;
};

/// Greedy in-order packing. Throws EmptyTopic.
ChunkPlan plan_chunks(int topic_id, const std::vector<Abstract>& abstracts,
                      std::size_t token_budget = kDefaultTokenBudget);

// ---- chat backends ---------------------------------------------------------

struct ChatMessage {
  std::string role;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  /// One attempt. Throws on failure; retries are the caller's business.
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
  virtual std::string model_name() const = 0;
};

struct ChatConfig {
  /// "mock" selects the built-in deterministic backend.
  std::string endpoint = "mock";
  std::string model = "mock";
  std::string api_key_env = "LITMAP_LLM_KEY";
  std::chrono::milliseconds timeout{60000};
  std::size_t max_attempts = 4;
  std::chrono::milliseconds backoff_base{200};
  std::size_t max_concurrent = 4;
  std::size_t token_budget = kDefaultTokenBudget;

  /// Throws ConfigInvalid.
  void validate() const;
};

/// POST <endpoint>/v1/chat {model, messages} -> {content}. Bearer key from
/// the configured env var when set. Throws Unreachable or BadResponse.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(ChatConfig config);
  std::string complete(const std::vector<ChatMessage>& messages) override;
  std::string model_name() const override { return config_.model; }

 private:
  ChatConfig config_;
};

/// Replies "Topic: <first sentence of the user message>\n<first sentence of
/// each paragraph, space-joined>". Pure function of the last user message.
class MockChatBackend : public ChatBackend {
 public:
  explicit MockChatBackend(std::string model = "mock") : model_(std::move(model)) {}
  std::string complete(const std::vector<ChatMessage>& messages) override;
  std::string model_name() const override { return model_; }

 private:
  std::string model_;
};

std::unique_ptr<ChatBackend> make_backend(const ChatConfig& config);

/// First sentence of `text` after whitespace collapse: up to and including
/// the first '.', '!' or '?' followed by a space or the end.
std::string first_sentence(std::string_view text);

// ---- summarization ---------------------------------------------------------

struct PromptSet {
  std::string chunk_template;
  std::string reduce_template;

  /// The shipped templates (version 1).
  static PromptSet builtin();
  /// 16 hex digits of FNV-1a over both templates.
  std::string fingerprint() const;
};

struct Exchange {
  std::string step;  // "chunk-<i>" or "reduce"
  std::size_t attempt = 0;
  std::vector<ChatMessage> request;
  std::string response;
  std::string error;
};

struct TopicDescription {
  int topic_id = 0;
  std::string title;
  std::string summary;
  std::vector<std::string> chunk_summaries;
  std::string model_name;
  std::string prompt_fingerprint;
  std::vector<Exchange> transcript;
};

struct SummarizeOptions {
  std::size_t max_concurrent = 4;
  std::size_t max_attempts = 4;
  std::chrono::milliseconds backoff_base{200};
};

/// Map step over chunks (bounded concurrency), then one reduce step over the
/// chunk summaries; title = first line of the reduce reply, summary = rest.
/// Throws EndpointError after max_attempts failures of one step, and
/// MalformedCompletion for a reply without a title line and body.
TopicDescription summarize_topic(const ChunkPlan& plan, const std::vector<Abstract>& abstracts,
                                 ChatBackend& backend, const PromptSet& prompts = PromptSet::builtin(),
                                 const SummarizeOptions& options = {});

std::string description_to_json(const TopicDescription& d);
/// One JSON object per exchange.
std::string transcript_to_jsonl(const TopicDescription& d);
void write_audit(const std::filesystem::path& dir, const TopicDescription& d);

// ---- human evaluation --------------------------------------------------------

struct RaterPair {
  bool rater1 = false;
  bool rater2 = false;
  bool operator==(const RaterPair&) const = default;
};

struct EvaluationSheet {
  int topic_id = 0;
  std::map<std::string, RaterPair> ratings;
};

std::size_t aligned_count(const EvaluationSheet& sheet);

/// Share of abstracts both raters marked yes. Throws EmptySheet.
double comprehensiveness(const EvaluationSheet& sheet);

struct KappaResult {
  double value = 0.0;
  /// Expected agreement was 1 (both raters used one identical category);
  /// value is then 1 if observed agreement is 1, else 0.
  bool degenerate_marginals = false;
};

/// Throws EmptySheet, and InvalidArgument for a single rating.
KappaResult cohens_kappa(const EvaluationSheet& sheet);

/// `topic_id,abstract_id,rater1,rater2`; ratings accept yes/no, y/n, 1/0,
/// true/false in any case. Throws FormatError, DuplicateId.
std::map<int, EvaluationSheet> parse_ratings_csv(std::string_view text);
std::map<int, EvaluationSheet> load_ratings(const std::filesystem::path& path);
std::string ratings_to_csv(const std::map<int, EvaluationSheet>& sheets);

/// Exact decimal rounding of num/den to `decimals` places, ties to even.
double round_ratio_half_even(std::size_t num, std::size_t den, int decimals = 2);

struct TopicEvalRow {
  int topic_id = 0;
  std::size_t n_docs = 0;
  std::size_t aligned = 0;
  double comprehensiveness = 0.0;
  std::optional<double> kappa;

  /// Comprehensiveness at two decimals, ties to even.
  double rounded() const;
};

TopicEvalRow evaluate_sheet(const EvaluationSheet& sheet);

struct ModelEval {
  std::string model;
  std::vector<TopicEvalRow> rows;

  /// Unweighted mean of unrounded per-topic comprehensiveness.
  double mean_comprehensiveness() const;
};

struct ModelComparison {
  /// Highest mean comprehensiveness; the earlier model wins an exact tie.
  std::size_t selected = 0;
  std::vector<double> means;
  /// Topics where each model's rounded comprehensiveness is strictly higher.
  std::vector<std::size_t> wins;
  std::size_t ties = 0;
};

/// Models must cover the same topic ids. Throws InvalidArgument.
ModelComparison compare_models(const std::vector<ModelEval>& models);

/// Per topic: docs, then aligned / comprehensiveness / kappa per model;
/// then per-model means, win counts and the selected model.
std::string evaluation_report(const std::vector<ModelEval>& models);

}  // namespace litmap::summarize
