#include <litmap/topic_model.hpp>

#include <litmap/csv.hpp>
#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <json.hpp>

#include <charconv>

namespace litmap::topics {

std::string topics_to_jsonl(const std::vector<Topic>& topics) {
  std::string out;
  for (const auto& t : topics) {
    nlohmann::ordered_json j;
    j["topic_id"] = t.topic_id;
    j["size"] = t.doc_ids.size();
    auto kws = nlohmann::ordered_json::array();
    for (const auto& k : t.keywords) {
      nlohmann::ordered_json kw;
      kw["token"] = k.token;
      kw["score"] = k.score;
      kws.push_back(std::move(kw));
    }
    j["keywords"] = std::move(kws);
    j["doc_ids"] = t.doc_ids;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<Topic> topics_from_jsonl(std::string_view content) {
  std::vector<Topic> topics;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(content)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Topic t;
      t.topic_id = j.at("topic_id").get<int>();
      t.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
      for (const auto& k : j.at("keywords")) {
        t.keywords.push_back({k.at("token").get<std::string>(), k.at("score").get<double>()});
      }
      topics.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(line_no, e.what());
    }
  }
  return topics;
}

std::string assignment_to_csv(const TopicAssignment& a) {
  std::string out = "record_id,topic_id\n";
  for (std::size_t i = 0; i < a.ids.size(); ++i) {
    out += csv::format_row({a.ids[i], std::to_string(a.labels[i])});
  }
  return out;
}

TopicAssignment assignment_from_csv(std::string_view content) {
  TopicAssignment a;
  const auto rows = csv::parse(content);
  if (rows.empty() || rows[0].fields.size() < 2 || rows[0].fields[0] != "record_id") {
    throw FormatError(1, "expected header record_id,topic_id");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != 2) throw FormatError(rows[r].line, "expected 2 columns");
    int label = 0;
    const auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), label);
    if (ec != std::errc{} || ptr != f[1].data() + f[1].size() || label < kNoise) {
      throw FormatError(rows[r].line, "bad topic_id '" + f[1] + "'");
    }
    a.ids.push_back(f[0]);
    a.labels.push_back(label);
  }
  return a;
}

}  // namespace litmap::topics
