#include <litmap/summarizer.hpp>

#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <spdlog/spdlog.h>

namespace litmap::summarize {

std::size_t estimate_tokens(std::string_view text) {
  return (text::codepoint_count(text) + 3) / 4;
}

ChunkPlan plan_chunks(int topic_id, const std::vector<Abstract>& abstracts,
                      std::size_t token_budget) {
  if (abstracts.empty()) throw EmptyTopic();
  if (token_budget == 0) throw InvalidArgument("token budget must be positive");

  ChunkPlan plan;
  plan.topic_id = topic_id;
  plan.token_budget = token_budget;
  std::size_t used = 0;
  for (const auto& a : abstracts) {
    const std::size_t cost = estimate_tokens(a.text);
    if (!plan.chunks.empty() && used + cost <= token_budget) {
      plan.chunks.back().push_back(a.id);
      used += cost;
      continue;
    }
    if (cost > token_budget) {
      spdlog::warn("topic {}: abstract {} needs ~{} tokens, over the budget of {}", topic_id, a.id,
                   cost, token_budget);
      plan.over_budget.push_back(plan.chunks.size());
      plan.chunks.push_back({a.id});
      used = token_budget + 1;  // nothing else joins an over-budget chunk
      continue;
    }
    plan.chunks.push_back({a.id});
    used = cost;
  }
  return plan;
}

}  // namespace litmap::summarize
