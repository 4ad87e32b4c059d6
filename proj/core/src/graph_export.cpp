#include <litmap/network.hpp>

#include <litmap/csv.hpp>
#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <sstream>
#include <unordered_map>

namespace litmap::net {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct NodeIds {
  std::unordered_map<std::string, std::string> id;
  explicit NodeIds(const CollabGraph& g) {
    for (const auto& [k, _] : g.nodes) id.emplace(k, "n" + std::to_string(id.size()));
  }
};

int community_of(const CommunityPartition* p, const std::string& key) {
  if (!p) return -1;
  const auto it = p->assignment.find(key);
  if (it == p->assignment.end()) throw InvalidArgument("partition does not cover node " + key);
  return it->second;
}

std::string gexf(const CollabGraph& g, const CommunityPartition* p) {
  const NodeIds ids(g);
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<gexf xmlns=\"http://gexf.net/1.3\" version=\"1.3\">\n"
    << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n"
    << "    <attributes class=\"node\">\n"
    << "      <attribute id=\"0\" title=\"publications\" type=\"integer\"/>\n";
  if (p) o << "      <attribute id=\"1\" title=\"community\" type=\"integer\"/>\n";
  o << "    </attributes>\n    <nodes>\n";
  for (const auto& [k, c] : g.nodes) {
    o << "      <node id=\"" << ids.id.at(k) << "\" label=\"" << xml_escape(k) << "\">\n"
      << "        <attvalues>\n"
      << "          <attvalue for=\"0\" value=\"" << c << "\"/>\n";
    if (p) o << "          <attvalue for=\"1\" value=\"" << community_of(p, k) << "\"/>\n";
    o << "        </attvalues>\n      </node>\n";
  }
  o << "    </nodes>\n    <edges>\n";
  std::size_t e = 0;
  for (const auto& [key, w] : g.edges) {
    o << "      <edge id=\"e" << e++ << "\" source=\"" << ids.id.at(key.first) << "\" target=\""
      << ids.id.at(key.second) << "\" weight=\"" << w << "\"/>\n";
  }
  o << "    </edges>\n  </graph>\n</gexf>\n";
  return o.str();
}

std::string graphml(const CollabGraph& g, const CommunityPartition* p) {
  const NodeIds ids(g);
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
    << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
    << "  <key id=\"publications\" for=\"node\" attr.name=\"publications\" attr.type=\"int\"/>\n";
  if (p) {
    o << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
  }
  o << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n"
    << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (const auto& [k, c] : g.nodes) {
    o << "    <node id=\"" << ids.id.at(k) << "\">\n"
      << "      <data key=\"label\">" << xml_escape(k) << "</data>\n"
      << "      <data key=\"publications\">" << c << "</data>\n";
    if (p) o << "      <data key=\"community\">" << community_of(p, k) << "</data>\n";
    o << "    </node>\n";
  }
  for (const auto& [key, w] : g.edges) {
    o << "    <edge source=\"" << ids.id.at(key.first) << "\" target=\"" << ids.id.at(key.second)
      << "\">\n      <data key=\"weight\">" << w << "</data>\n    </edge>\n";
  }
  o << "  </graph>\n</graphml>\n";
  return o.str();
}

std::string edge_csv(const CollabGraph& g) {
  std::string out = "source,target,weight\n";
  for (const auto& [key, w] : g.edges) {
    out += csv::format_row({key.first, key.second, std::to_string(w)});
  }
  return out;
}

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
  const std::string n = text::to_lower(text::trim(name));
  if (n == "gexf") return GraphFormat::gexf;
  if (n == "graphml") return GraphFormat::graphml;
  if (n == "edge_csv" || n == "csv") return GraphFormat::edge_csv;
  throw InvalidArgument("unknown graph format: " + std::string(name));
}

std::string_view file_extension(GraphFormat f) {
  switch (f) {
    case GraphFormat::gexf: return ".gexf";
    case GraphFormat::graphml: return ".graphml";
    case GraphFormat::edge_csv: return ".csv";
  }
  return ".gexf";
}

std::string format_graph(const CollabGraph& g, const CommunityPartition* partition,
                         GraphFormat format) {
  switch (format) {
    case GraphFormat::gexf: return gexf(g, partition);
    case GraphFormat::graphml: return graphml(g, partition);
    case GraphFormat::edge_csv: return edge_csv(g);
  }
  return {};
}

void export_graph(const CollabGraph& g, const CommunityPartition* partition,
                  const std::filesystem::path& path, GraphFormat format) {
  text::write_file(path, format_graph(g, partition, format));
}

}  // namespace litmap::net
