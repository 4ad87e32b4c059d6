#include <litmap/pipeline.hpp>

#include <litmap/error.hpp>
#include <litmap/hashing.hpp>
#include <litmap/text_util.hpp>

#include <json.hpp>

namespace litmap::pipeline {

using nlohmann::ordered_json;

std::string Manifest::to_json() const {
  ordered_json stages_json = ordered_json::array();
  for (Stage s : all_stages()) {
    const auto it = stages.find(std::string(to_string(s)));
    if (it == stages.end()) continue;
    const auto& r = it->second;
    ordered_json j;
    j["stage"] = r.stage;
    j["inputs"] = r.inputs;
    j["config_hash"] = r.config_hash;
    j["outputs"] = r.outputs;
    j["duration_ms"] = r.duration_ms;
    j["skipped"] = r.skipped;
    stages_json.push_back(std::move(j));
  }
  return ordered_json{{"stages", stages_json}}.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view json) {
  Manifest m;
  try {
    const auto j = ordered_json::parse(json);
    for (const auto& s : j.at("stages")) {
      StageRecord r;
      r.stage = s.at("stage").get<std::string>();
      r.inputs = s.at("inputs").get<std::map<std::string, std::string>>();
      r.config_hash = s.at("config_hash").get<std::string>();
      r.outputs = s.at("outputs").get<std::map<std::string, std::string>>();
      r.duration_ms = s.at("duration_ms").get<double>();
      r.skipped = s.at("skipped").get<bool>();
      m.stages[r.stage] = std::move(r);
    }
  } catch (const ordered_json::exception& e) {
    throw FormatError(0, std::string("manifest: ") + e.what());
  }
  return m;
}

Manifest Manifest::load(const fs::path& path) {
  if (!fs::exists(path)) return {};
  return from_json(text::read_file(path));
}

void Manifest::save(const fs::path& path) const { text::write_file(path, to_json()); }

std::vector<VerifyIssue> verify(const Manifest& manifest, const fs::path& out_dir) {
  std::vector<VerifyIssue> issues;
  for (const auto& [_, r] : manifest.stages) {
    for (const auto& [rel, hash] : r.outputs) {
      const fs::path p = out_dir / rel;
      if (!fs::is_regular_file(p)) {
        issues.push_back({rel, "missing"});
      } else if (hashing::sha256_file(p) != hash) {
        issues.push_back({rel, "hash mismatch"});
      }
    }
  }
  return issues;
}

}  // namespace litmap::pipeline
