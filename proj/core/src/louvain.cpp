#include <litmap/network.hpp>

#include <litmap/error.hpp>

#include <algorithm>
#include <map>
#include <unordered_map>

namespace litmap::net {

namespace {

constexpr double kMinGain = 1e-9;

struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self_loop;
  double total = 0.0;  // each edge once, loops included

  std::size_t size() const { return adj.size(); }
  double degree(std::size_t i) const {
    double k = 2.0 * self_loop[i];
    for (const auto& [_, w] : adj[i]) k += w;
    return k;
  }
};

// One level of local moving. Returns community per node, numbered densely by
// first member, and whether anything moved.
bool local_moves(const WeightedGraph& g, std::vector<std::size_t>& community) {
  const std::size_t n = g.size();
  const double m = g.total;
  const double m2 = 2.0 * m;
  community.resize(n);
  std::vector<double> degree(n), tot(n);
  for (std::size_t i = 0; i < n; ++i) {
    community[i] = i;
    degree[i] = g.degree(i);
    tot[i] = degree[i];
  }

  bool any_move = false;
  bool moved = true;
  std::map<std::size_t, double> links;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t own = community[i];
      links.clear();
      links[own] = 0.0;
      for (const auto& [j, w] : g.adj[i]) links[community[j]] += w;
      tot[own] -= degree[i];

      const auto gain = [&](std::size_t c) { return links[c] - tot[c] * degree[i] / m2; };
      std::size_t best = own;
      double best_gain = gain(own);
      for (const auto& [c, _] : links) {
        const double gc = gain(c);
        if ((gc - best_gain) / m > kMinGain) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += degree[i];
      if (best != own) {
        community[i] = best;
        moved = true;
        any_move = true;
      }
    }
  }

  std::unordered_map<std::size_t, std::size_t> renumber;
  for (auto& c : community) {
    const auto [it, _] = renumber.emplace(c, renumber.size());
    c = it->second;
  }
  return any_move;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& community,
                        std::size_t n_comm) {
  WeightedGraph out;
  out.adj.resize(n_comm);
  out.self_loop.assign(n_comm, 0.0);
  out.total = g.total;
  std::vector<std::map<std::size_t, double>> merged(n_comm);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t ci = community[i];
    out.self_loop[ci] += g.self_loop[i];
    for (const auto& [j, w] : g.adj[i]) {
      const std::size_t cj = community[j];
      if (ci == cj) {
        if (i < j) out.self_loop[ci] += w;
      } else {
        merged[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < n_comm; ++c) out.adj[c].assign(merged[c].begin(), merged[c].end());
  return out;
}

}  // namespace

double modularity(const CollabGraph& g, const std::map<std::string, int>& assignment) {
  for (const auto& [k, _] : g.nodes) {
    if (!assignment.count(k)) throw InvalidArgument("node without community: " + k);
  }
  double m = 0.0;
  for (const auto& [_, w] : g.edges) m += static_cast<double>(w);
  if (m == 0.0) return 0.0;

  std::map<int, double> inside, degree;
  for (const auto& [e, w] : g.edges) {
    const int a = assignment.at(e.first);
    const int b = assignment.at(e.second);
    degree[a] += static_cast<double>(w);
    degree[b] += static_cast<double>(w);
    if (a == b) inside[a] += static_cast<double>(w);
  }
  double q = 0.0;
  for (const auto& [c, d] : degree) {
    const double in = inside.count(c) ? inside.at(c) : 0.0;
    q += in / m - (d / (2.0 * m)) * (d / (2.0 * m));
  }
  return q;
}

CommunityPartition detect_communities(const CollabGraph& g, std::uint64_t /*seed*/) {
  if (g.nodes.empty()) throw EmptyGraph();

  std::vector<std::string> keys;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& [k, _] : g.nodes) {
    index.emplace(k, keys.size());
    keys.push_back(k);
  }
  WeightedGraph wg;
  wg.adj.resize(keys.size());
  wg.self_loop.assign(keys.size(), 0.0);
  for (const auto& [e, w] : g.edges) {
    const std::size_t a = index.at(e.first);
    const std::size_t b = index.at(e.second);
    wg.adj[a].emplace_back(b, static_cast<double>(w));
    wg.adj[b].emplace_back(a, static_cast<double>(w));
    wg.total += static_cast<double>(w);
  }
  for (auto& row : wg.adj) std::sort(row.begin(), row.end());

  std::vector<std::size_t> membership(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) membership[i] = i;

  if (wg.total > 0.0) {
    std::vector<std::size_t> community;
    while (true) {
      const bool moved = local_moves(wg, community);
      std::size_t n_comm = 0;
      for (auto c : community) n_comm = std::max(n_comm, c + 1);
      if (!moved || n_comm == wg.size()) break;
      for (auto& c : membership) c = community[c];
      wg = aggregate(wg, community, n_comm);
    }
  }

  CommunityPartition p;
  std::unordered_map<std::size_t, int> renumber;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto [it, _] = renumber.emplace(membership[i], static_cast<int>(renumber.size()));
    p.assignment.emplace(keys[i], it->second);
  }
  p.n_communities = renumber.size();
  p.modularity = modularity(g, p.assignment);
  return p;
}

}  // namespace litmap::net
