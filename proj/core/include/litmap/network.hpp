#pragma once

// Collaboration networks over countries, institutions and authors, with
// modularity-based community detection and graph file export.

#include <litmap/ingest.hpp>
#include <litmap/topic_model.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace litmap::net {

enum class EntityKind { country, institution, author };

std::string_view to_string(EntityKind k);
EntityKind parse_entity_kind(std::string_view name);

/// Trimmed, whitespace-collapsed, ASCII case-folded.
std::string canonical_key(std::string_view raw);

/// Optional rewrite of canonical keys, loaded from a two-column CSV
/// `alias,canonical`. Both columns are canonicalized on load.
class AliasMap {
 public:
  AliasMap() = default;
  static AliasMap parse(std::string_view csv_text);
  static AliasMap load(const std::filesystem::path& path);

  void add(std::string_view alias, std::string_view canonical);
  const std::string& resolve(const std::string& key) const;
  std::size_t size() const noexcept { return map_.size(); }

 private:
  std::map<std::string, std::string> map_;
};

/// Distinct entity keys of one record, sorted. Institutions use each
/// author's first affiliation only; countries use every affiliation.
std::vector<std::string> entities_of(const ingest::BiblioRecord& record, EntityKind kind,
                                     const AliasMap* aliases = nullptr);

struct EntityCounts {
  std::map<std::string, std::size_t> counts;
  /// Records that yielded no entity of this kind (logged as warnings).
  std::vector<std::string> skipped;
};

EntityCounts count_entities(const std::vector<ingest::BiblioRecord>& records, EntityKind kind,
                            const AliasMap* aliases = nullptr);

using EdgeKey = std::pair<std::string, std::string>;  // first < second

struct CollabGraph {
  EntityKind kind = EntityKind::country;
  std::map<std::string, std::size_t> nodes;
  std::map<EdgeKey, std::size_t> edges;
  std::vector<std::string> doc_basis;

  /// 0 when absent; symmetric in its arguments.
  std::size_t edge_weight(const std::string& a, const std::string& b) const;
  bool operator==(const CollabGraph&) const = default;
};

CollabGraph build_graph(const std::vector<ingest::BiblioRecord>& records, EntityKind kind,
                        const AliasMap* aliases = nullptr);

/// Drops nodes with count < min_publications and their incident edges.
CollabGraph filter_graph(const CollabGraph& g, std::size_t min_publications);

struct CommunityPartition {
  std::map<std::string, int> assignment;
  double modularity = 0.0;
  std::size_t n_communities = 0;
};

/// Weighted modularity of an arbitrary assignment; 0 for an edgeless graph.
double modularity(const CollabGraph& g, const std::map<std::string, int>& assignment);

/// Louvain-style local moving plus aggregation, visiting nodes in key order.
/// Community ids are numbered by their smallest member key. `seed` is
/// accepted for interface stability; the result does not depend on it.
CommunityPartition detect_communities(const CollabGraph& g, std::uint64_t seed = 0);

enum class GraphFormat { gexf, graphml, edge_csv };

GraphFormat parse_graph_format(std::string_view name);
std::string_view file_extension(GraphFormat f);

std::string format_graph(const CollabGraph& g, const CommunityPartition* partition,
                         GraphFormat format);
void export_graph(const CollabGraph& g, const CommunityPartition* partition,
                  const std::filesystem::path& path, GraphFormat format);

/// `entity,count`, count descending then entity ascending.
std::string rankings_csv(const std::map<std::string, std::size_t>& counts);

/// `entity,topic_id,count`, one row per (entity, topic) with a non-zero count.
std::string topic_counts_csv(const std::map<int, CollabGraph>& per_topic);

/// One graph per requested topic, built from that topic's documents only.
std::map<int, CollabGraph> topicwise(const std::vector<ingest::BiblioRecord>& records,
                                     const topics::TopicAssignment& assignment,
                                     const std::vector<int>& topic_ids, EntityKind kind,
                                     const AliasMap* aliases = nullptr);

}  // namespace litmap::net
