#include <litmap/summarizer.hpp>

#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>

namespace litmap::summarize {

using nlohmann::json;

void ChatConfig::validate() const {
  if (endpoint.empty()) throw ConfigInvalid("llm.endpoint", "must not be empty");
  if (model.empty()) throw ConfigInvalid("llm.model", "must not be empty");
  if (max_attempts == 0) throw ConfigInvalid("llm.max_attempts", "must be at least 1");
  if (max_concurrent == 0) throw ConfigInvalid("llm.max_concurrent", "must be at least 1");
  if (token_budget == 0) throw ConfigInvalid("llm.token_budget", "must be positive");
  if (timeout.count() <= 0) throw ConfigInvalid("llm.timeout_ms", "must be positive");
}

HttpChatBackend::HttpChatBackend(ChatConfig config) : config_(std::move(config)) {
  config_.validate();
}

std::string HttpChatBackend::complete(const std::vector<ChatMessage>& messages) {
  const std::string& url = config_.endpoint;
  const auto scheme = url.find("://");
  const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  const std::string host = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  const std::string body = json{{"model", config_.model}, {"messages", msgs}}.dump();

  httplib::Client client(host);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const auto res = client.Post(prefix + "/v1/chat", headers, body, "application/json");
  if (!res) throw Unreachable("chat endpoint " + url + ": " + httplib::to_string(res.error()));
  if (res->status != 200) throw BadResponse(res->status, res->body.substr(0, 200));
  try {
    return json::parse(res->body).at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw BadResponse(res->status, std::string("no content field: ") + e.what());
  }
}

std::string first_sentence(std::string_view raw) {
  const std::string s = text::collapse_whitespace(raw);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == s.size() || s[i + 1] == ' ')) {
      return s.substr(0, i + 1);
    }
  }
  return s;
}

std::string MockChatBackend::complete(const std::vector<ChatMessage>& messages) {
  std::string_view payload;
  for (const auto& m : messages) {
    if (m.role == "user") payload = m.content;
  }
  std::vector<std::string> firsts;
  std::string paragraph;
  const auto flush = [&] {
    if (auto f = first_sentence(paragraph); !f.empty()) firsts.push_back(std::move(f));
    paragraph.clear();
  };
  for (const auto& line : text::split_lines(payload)) {
    if (text::trim(line).empty()) {
      flush();
    } else {
      paragraph += line;
      paragraph += ' ';
    }
  }
  flush();

  std::string out = "Topic: " + first_sentence(payload) + "\n";
  for (std::size_t i = 0; i < firsts.size(); ++i) {
    if (i > 0) out += ' ';
    out += firsts[i];
  }
  return out;
}

std::unique_ptr<ChatBackend> make_backend(const ChatConfig& config) {
  config.validate();
  if (config.endpoint == "mock") return std::make_unique<MockChatBackend>(config.model);
  return std::make_unique<HttpChatBackend>(config);
}

}  // namespace litmap::summarize
