#include <litmap/network.hpp>

#include <litmap/csv.hpp>
#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>
#include <unordered_set>

namespace litmap::net {

std::string_view to_string(EntityKind k) {
  switch (k) {
    case EntityKind::country: return "country";
    case EntityKind::institution: return "institution";
    case EntityKind::author: return "author";
  }
  return "country";
}

EntityKind parse_entity_kind(std::string_view name) {
  const std::string n = text::to_lower(text::trim(name));
  if (n == "country" || n == "countries") return EntityKind::country;
  if (n == "institution" || n == "institutions") return EntityKind::institution;
  if (n == "author" || n == "authors") return EntityKind::author;
  throw InvalidArgument("unknown entity kind: " + std::string(name));
}

std::string canonical_key(std::string_view raw) {
  return text::to_lower(text::collapse_whitespace(raw));
}

AliasMap AliasMap::parse(std::string_view csv_text) {
  AliasMap m;
  for (const auto& row : csv::parse(csv_text)) {
    if (row.fields.size() < 2) throw FormatError(row.line, "alias row needs two columns");
    if (row.line == 1 && canonical_key(row.fields[0]) == "alias") continue;
    m.add(row.fields[0], row.fields[1]);
  }
  return m;
}

AliasMap AliasMap::load(const std::filesystem::path& path) {
  return parse(text::read_file(path));
}

void AliasMap::add(std::string_view alias, std::string_view canonical) {
  auto a = canonical_key(alias);
  auto c = canonical_key(canonical);
  if (a.empty() || c.empty()) throw InvalidArgument("alias entries must be non-empty");
  map_[std::move(a)] = std::move(c);
}

const std::string& AliasMap::resolve(const std::string& key) const {
  const auto it = map_.find(key);
  return it == map_.end() ? key : it->second;
}

std::vector<std::string> entities_of(const ingest::BiblioRecord& record, EntityKind kind,
                                     const AliasMap* aliases) {
  std::set<std::string> keys;
  const auto add = [&](std::string_view raw) {
    std::string k = canonical_key(raw);
    if (k.empty()) return;
    if (aliases) k = aliases->resolve(k);
    keys.insert(std::move(k));
  };
  for (const auto& a : record.authors) {
    switch (kind) {
      case EntityKind::country:
        for (const auto& aff : a.affiliations) add(aff.country);
        break;
      case EntityKind::institution:
        if (!a.affiliations.empty()) add(a.affiliations.front().institution);
        break;
      case EntityKind::author:
        if (!text::trim(a.last_name).empty()) add(a.identity_key());
        break;
    }
  }
  return {keys.begin(), keys.end()};
}

EntityCounts count_entities(const std::vector<ingest::BiblioRecord>& records, EntityKind kind,
                            const AliasMap* aliases) {
  EntityCounts out;
  for (const auto& r : records) {
    const auto keys = entities_of(r, kind, aliases);
    if (keys.empty()) {
      spdlog::warn("record {} has no {} information; skipped for {} counts", r.record_id,
                   to_string(kind), to_string(kind));
      out.skipped.push_back(r.record_id);
      continue;
    }
    for (const auto& k : keys) ++out.counts[k];
  }
  return out;
}

std::size_t CollabGraph::edge_weight(const std::string& a, const std::string& b) const {
  const auto it = edges.find(a < b ? EdgeKey{a, b} : EdgeKey{b, a});
  return it == edges.end() ? 0 : it->second;
}

CollabGraph build_graph(const std::vector<ingest::BiblioRecord>& records, EntityKind kind,
                        const AliasMap* aliases) {
  CollabGraph g;
  g.kind = kind;
  for (const auto& r : records) {
    g.doc_basis.push_back(r.record_id);
    const auto keys = entities_of(r, kind, aliases);
    if (keys.empty()) {
      spdlog::warn("record {} has no {} information; skipped for {} graph", r.record_id,
                   to_string(kind), to_string(kind));
      continue;
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      ++g.nodes[keys[i]];
      for (std::size_t j = i + 1; j < keys.size(); ++j) ++g.edges[{keys[i], keys[j]}];
    }
  }
  return g;
}

CollabGraph filter_graph(const CollabGraph& g, std::size_t min_publications) {
  CollabGraph out;
  out.kind = g.kind;
  out.doc_basis = g.doc_basis;
  for (const auto& [k, c] : g.nodes) {
    if (c >= min_publications) out.nodes.emplace(k, c);
  }
  for (const auto& [e, w] : g.edges) {
    if (out.nodes.count(e.first) && out.nodes.count(e.second)) out.edges.emplace(e, w);
  }
  return out;
}

std::string rankings_csv(const std::map<std::string, std::size_t>& counts) {
  std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::string out = "entity,count\n";
  for (const auto& [k, c] : rows) out += csv::format_row({k, std::to_string(c)});
  return out;
}

std::string topic_counts_csv(const std::map<int, CollabGraph>& per_topic) {
  std::set<std::string> entities;
  for (const auto& [_, g] : per_topic) {
    for (const auto& [k, __] : g.nodes) entities.insert(k);
  }
  std::string out = "entity,topic_id,count\n";
  for (const auto& e : entities) {
    for (const auto& [t, g] : per_topic) {
      const auto it = g.nodes.find(e);
      if (it == g.nodes.end()) continue;
      out += csv::format_row({e, std::to_string(t), std::to_string(it->second)});
    }
  }
  return out;
}

std::map<int, CollabGraph> topicwise(const std::vector<ingest::BiblioRecord>& records,
                                     const topics::TopicAssignment& assignment,
                                     const std::vector<int>& topic_ids, EntityKind kind,
                                     const AliasMap* aliases) {
  const auto labels = assignment.as_map();
  std::set<int> known;
  for (const auto& [_, l] : labels) {
    if (l != topics::kNoise) known.insert(l);
  }
  std::map<int, CollabGraph> out;
  for (int t : topic_ids) {
    if (!known.count(t)) throw UnknownTopic(t);
    std::vector<ingest::BiblioRecord> subset;
    for (const auto& r : records) {
      const auto it = labels.find(r.record_id);
      if (it != labels.end() && it->second == t) subset.push_back(r);
    }
    out.emplace(t, build_graph(subset, kind, aliases));
  }
  return out;
}

}  // namespace litmap::net
