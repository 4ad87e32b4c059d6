#include <litmap/topic_eval.hpp>

#include <litmap/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace litmap::eval {

using nlohmann::ordered_json;

std::string report_to_json(const ModelReport& r) {
  ordered_json j;
  j["model_name"] = r.model_name;
  j["n_topics"] = r.n_topics;
  j["avg_coherence"] = r.avg_coherence;
  j["perplexity"] = r.perplexity;
  j["diversity"] = r.diversity;
  j["avg_embedding_similarity"] =
      r.avg_embedding_similarity ? ordered_json(*r.avg_embedding_similarity) : ordered_json();
  j["avg_significance"] = r.avg_significance;
  ordered_json per = ordered_json::object();
  for (const auto& [id, v] : r.per_topic_significance) per[std::to_string(id)] = v;
  j["per_topic_significance"] = std::move(per);
  return j.dump(2) + "\n";
}

ModelReport report_from_json(std::string_view json) {
  ordered_json j;
  try {
    j = ordered_json::parse(json);
  } catch (const ordered_json::parse_error& e) {
    throw FormatError(0, std::string("model report: ") + e.what());
  }
  try {
    ModelReport r;
    r.model_name = j.at("model_name").get<std::string>();
    r.n_topics = j.at("n_topics").get<std::size_t>();
    r.avg_coherence = j.at("avg_coherence").get<double>();
    r.perplexity = j.at("perplexity").get<double>();
    r.diversity = j.at("diversity").get<double>();
    if (const auto& s = j.at("avg_embedding_similarity"); !s.is_null()) {
      r.avg_embedding_similarity = s.get<double>();
    }
    r.avg_significance = j.at("avg_significance").get<double>();
    for (const auto& [k, v] : j.at("per_topic_significance").items()) {
      r.per_topic_significance[std::stoi(k)] = v.get<double>();
    }
    return r;
  } catch (const ordered_json::exception& e) {
    throw FormatError(0, std::string("model report: ") + e.what());
  } catch (const std::logic_error& e) {
    throw FormatError(0, std::string("model report: bad topic id: ") + e.what());
  }
}

namespace {

struct MetricRow {
  const char* label;
  bool higher_is_better;
  std::function<std::optional<double>(const ModelReport&)> get;
};

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string comparison_table(const std::vector<ModelReport>& reports) {
  const std::vector<MetricRow> rows = {
      {"Coherence (up)", true, [](const ModelReport& r) { return std::optional(r.avg_coherence); }},
      {"Perplexity (down)", false, [](const ModelReport& r) { return std::optional(r.perplexity); }},
      {"Diversity (up)", true, [](const ModelReport& r) { return std::optional(r.diversity); }},
      {"Embedding similarity (down)", false,
       [](const ModelReport& r) { return r.avg_embedding_similarity; }},
      {"Significance (up)", true,
       [](const ModelReport& r) { return std::optional(r.avg_significance); }},
  };

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Metric"};
  for (const auto& r : reports) header.push_back(r.model_name);
  cells.push_back(header);
  for (const auto& row : rows) {
    std::optional<double> best;
    for (const auto& r : reports) {
      const auto v = row.get(r);
      if (!v) continue;
      if (!best || (row.higher_is_better ? *v > *best : *v < *best)) best = v;
    }
    std::vector<std::string> line{row.label};
    for (const auto& r : reports) {
      const auto v = row.get(r);
      if (!v) {
        line.emplace_back("-");
        continue;
      }
      line.push_back(fmt4(*v) + (*v == *best ? "*" : ""));
    }
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) out << "  ";
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size(), ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace litmap::eval
