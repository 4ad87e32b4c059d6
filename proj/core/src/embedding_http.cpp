#include <litmap/embedding.hpp>

#include <litmap/error.hpp>
#include <litmap/parallel.hpp>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <thread>

namespace litmap::embedding {

namespace {

using nlohmann::json;

struct Endpoint {
  std::string scheme_host_port;
  std::string path_prefix;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  Endpoint e;
  if (path_start == std::string::npos) {
    e.scheme_host_port = url;
  } else {
    e.scheme_host_port = url.substr(0, path_start);
    e.path_prefix = url.substr(path_start);
    while (!e.path_prefix.empty() && e.path_prefix.back() == '/') e.path_prefix.pop_back();
  }
  return e;
}

struct BatchResult {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

std::string body_prefix(const std::string& body) { return body.substr(0, 200); }

BatchResult parse_batch(const std::string& body, std::size_t first_line_status) {
  BatchResult out;
  json j;
  try {
    j = json::parse(body);
    out.dim = j.at("dim").get<std::size_t>();
    if (out.dim == 0) throw BadResponse(static_cast<int>(first_line_status), "dim is 0");
    for (const auto& v : j.at("vectors")) {
      auto values = v.at("v").get<std::vector<double>>();
      if (values.size() != out.dim) {
        throw BadResponse(static_cast<int>(first_line_status),
                          "vector length " + std::to_string(values.size()) + " != dim");
      }
      out.vectors[v.at("id").get<std::string>()] = std::move(values);
    }
  } catch (const json::exception& e) {
    throw BadResponse(static_cast<int>(first_line_status),
                      std::string("unparseable body: ") + e.what() + " | " + body_prefix(body));
  }
  return out;
}

BatchResult post_batch(const Endpoint& endpoint, const std::vector<IdText>& texts,
                       std::size_t begin, std::size_t end, const ProviderConfig& config,
                       const std::string& token) {
  json inputs = json::array();
  for (std::size_t i = begin; i < end; ++i) {
    inputs.push_back({{"id", texts[i].id}, {"text", texts[i].text}});
  }
  const std::string payload = json{{"inputs", inputs}}.dump();
  const std::string path = endpoint.path_prefix + "/embed";

  std::string last_error;
  for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config.backoff_base * (1LL << (attempt - 1)));
    }
    httplib::Client client(endpoint.scheme_host_port);
    const auto secs = config.timeout.count() / 1000;
    const auto usecs = (config.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      spdlog::warn("embed batch [{}, {}): attempt {} failed: {}", begin, end, attempt + 1,
                   last_error);
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "status " + std::to_string(res->status);
      spdlog::warn("embed batch [{}, {}): attempt {} got {}", begin, end, attempt + 1,
                   res->status);
      if (attempt + 1 == config.max_attempts) {
        throw BadResponse(res->status, body_prefix(res->body));
      }
      continue;
    }
    if (res->status != 200) throw BadResponse(res->status, body_prefix(res->body));
    return parse_batch(res->body, static_cast<std::size_t>(res->status));
  }
  throw Unreachable("embedding endpoint " + endpoint.scheme_host_port + path + ": " +
                    last_error);
}

}  // namespace

EmbeddingMatrix fetch_embeddings(const std::vector<IdText>& texts, const ProviderConfig& config,
                                 Kind kind) {
  if (config.mode != ProviderMode::http) {
    throw ConfigInvalid("embedding.mode", "fetch_embeddings requires mode=http");
  }
  config.validate();
  const Endpoint endpoint = split_endpoint(*config.endpoint);
  std::string token;
  if (const char* v = std::getenv(config.auth_token_env.c_str())) token = v;

  const std::size_t n_batches = (texts.size() + config.batch_size - 1) / config.batch_size;
  std::vector<BatchResult> batches(n_batches);
  parallel_for(n_batches, config.max_concurrent, [&](std::size_t b) {
    const std::size_t begin = b * config.batch_size;
    const std::size_t end = std::min(texts.size(), begin + config.batch_size);
    batches[b] = post_batch(endpoint, texts, begin, end, config, token);
  });

  std::size_t dim = 0;
  for (const auto& b : batches) {
    if (dim == 0) dim = b.dim;
    if (b.dim != dim) throw BadResponse(200, "inconsistent dim across batches");
  }
  std::vector<std::string> ids;
  std::vector<double> values;
  std::vector<std::string> missing;
  ids.reserve(texts.size());
  values.reserve(texts.size() * dim);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto& batch = batches[i / config.batch_size];
    const auto it = batch.vectors.find(texts[i].id);
    if (it == batch.vectors.end()) {
      missing.push_back(texts[i].id);
      continue;
    }
    ids.push_back(texts[i].id);
    values.insert(values.end(), it->second.begin(), it->second.end());
  }
  if (!missing.empty()) throw PartialResponse(std::move(missing));
  if (ids.empty()) return {};
  return EmbeddingMatrix(std::move(ids), dim, std::move(values), kind);
}

}  // namespace litmap::embedding
