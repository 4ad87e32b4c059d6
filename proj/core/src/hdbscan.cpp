#include <litmap/topic_model.hpp>

#include <litmap/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace litmap::topics {

namespace {

constexpr double kMaxLambda = 1e12;

double lambda_of(double distance) {
  return distance > 1.0 / kMaxLambda ? 1.0 / distance : kMaxLambda;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

struct Edge {
  std::size_t a, b;
  double weight;
};

// Prim's algorithm on the complete mutual-reachability graph; O(n^2) time,
// O(n) memory.
std::vector<Edge> mutual_reachability_mst(const EmbeddingMatrix& pts,
                                          const std::vector<double>& core) {
  const std::size_t n = pts.rows();
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const auto row = pts.row(current);
    std::size_t next = n;
    double next_w = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double mr = std::max({core[current], core[j], euclidean(row, pts.row(j))});
      if (mr < best[j]) {
        best[j] = mr;
        from[j] = current;
      }
      if (best[j] < next_w) {
        next_w = best[j];
        next = j;
      }
    }
    in_tree[next] = true;
    edges.push_back({from[next], next, next_w});
    current = next;
  }
  return edges;
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  std::vector<std::size_t> parent;
  std::vector<std::size_t> size;
};

struct LinkageNode {
  std::size_t left = 0, right = 0;
  double distance = 0.0;
  std::size_t size = 1;
};

// Condensed-tree row: `child` is a point index (< n) or a cluster label (>= n).
struct CondensedEntry {
  std::size_t parent;
  std::size_t child;
  double lambda;
  std::size_t child_size;
};

}  // namespace

ClusterResult cluster_density(const EmbeddingMatrix& points, std::size_t min_cluster,
                              std::size_t min_samples) {
  const std::size_t n = points.rows();
  if (min_cluster < 2) throw InvalidArgument("min_cluster must be >= 2");
  if (min_samples < 1) throw InvalidArgument("min_samples must be >= 1");
  if (n < min_cluster) throw TooFewPoints(n, min_cluster);

  // Core distances (self counts as the first neighbour).
  const std::size_t k = std::min(min_samples, n);
  std::vector<double> core(n);
  std::vector<double> dists(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dists[j] = euclidean(points.row(i), points.row(j));
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     dists.end());
    core[i] = dists[k - 1];
  }

  std::vector<Edge> mst = mutual_reachability_mst(points, core);
  std::stable_sort(mst.begin(), mst.end(), [](const Edge& x, const Edge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    return std::minmax(x.a, x.b) < std::minmax(y.a, y.b);
  });

  // Single-linkage tree: leaves 0..n-1, internal nodes n..2n-2.
  std::vector<LinkageNode> tree(2 * n - 1);
  UnionFind uf(2 * n - 1);
  for (std::size_t e = 0; e < mst.size(); ++e) {
    const std::size_t ra = uf.find(mst[e].a);
    const std::size_t rb = uf.find(mst[e].b);
    const std::size_t node = n + e;
    tree[node] = {ra, rb, mst[e].weight, tree[ra].size + tree[rb].size};
    uf.parent[ra] = node;
    uf.parent[rb] = node;
  }
  const std::size_t root = 2 * n - 2;

  auto collect_points = [&](std::size_t node, std::vector<std::size_t>& out) {
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      if (x < n) {
        out.push_back(x);
      } else {
        stack.push_back(tree[x].right);
        stack.push_back(tree[x].left);
      }
    }
  };

  // Condense: walk top-down, tracking which cluster label each linkage node
  // belongs to.
  std::vector<CondensedEntry> condensed;
  std::vector<double> birth_lambda{0.0};   // indexed by label - n
  std::vector<std::size_t> cluster_parent{0};
  std::size_t next_label = n + 1;
  std::vector<std::pair<std::size_t, std::size_t>> work{{root, n}};  // (node, label)
  std::vector<std::size_t> fallen;
  if (n == 1) work.clear();
  while (!work.empty()) {
    const auto [node, label] = work.back();
    work.pop_back();
    const LinkageNode& ln = tree[node];
    const double lambda = lambda_of(ln.distance);
    const std::size_t left = ln.left, right = ln.right;
    const std::size_t left_size = tree[left].size, right_size = tree[right].size;
    const bool left_big = left_size >= min_cluster;
    const bool right_big = right_size >= min_cluster;

    auto spill = [&](std::size_t child) {
      fallen.clear();
      collect_points(child, fallen);
      for (std::size_t p : fallen) condensed.push_back({label, p, lambda, 1});
    };
    auto descend = [&](std::size_t child, std::size_t child_label) {
      if (child >= n) {
        work.emplace_back(child, child_label);
      } else {
        condensed.push_back({child_label, child, lambda, 1});
      }
    };

    if (left_big && right_big) {
      for (const std::size_t child : {left, right}) {
        const std::size_t child_label = next_label++;
        birth_lambda.push_back(lambda);
        cluster_parent.push_back(label);
        condensed.push_back({label, child_label, lambda, tree[child].size});
        descend(child, child_label);
      }
    } else if (!left_big && !right_big) {
      spill(left);
      spill(right);
    } else if (left_big) {
      spill(right);
      descend(left, label);
    } else {
      spill(left);
      descend(right, label);
    }
  }

  // Stability (excess of mass) per cluster.
  const std::size_t n_clusters_total = next_label - n;
  std::vector<double> stability(n_clusters_total, 0.0);
  std::vector<std::vector<std::size_t>> children(n_clusters_total);
  std::vector<std::size_t> point_parent(n, n);
  for (const auto& e : condensed) {
    const std::size_t c = e.parent - n;
    stability[c] += (e.lambda - birth_lambda[c]) * static_cast<double>(e.child_size);
    if (e.child >= n) {
      children[c].push_back(e.child - n);
    } else {
      point_parent[e.child] = e.parent;
    }
  }

  // Labels grow top-down, so children always have larger labels.
  std::vector<bool> selected(n_clusters_total, false);
  std::vector<double> subtree(stability);
  for (std::size_t c = n_clusters_total; c-- > 1;) {
    double child_sum = 0.0;
    for (std::size_t ch : children[c]) child_sum += subtree[ch];
    if (!children[c].empty() && child_sum > stability[c]) {
      subtree[c] = child_sum;
    } else {
      selected[c] = true;
      std::vector<std::size_t> stack(children[c]);
      while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        selected[x] = false;
        stack.insert(stack.end(), children[x].begin(), children[x].end());
      }
    }
  }

  ClusterResult result;
  result.labels.assign(n, kNoise);
  std::vector<int> relabel(n_clusters_total, kNoise);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t c = point_parent[p];
    if (c < n) continue;
    c -= n;
    while (c != 0 && !selected[c]) c = cluster_parent[c] - n;
    if (c == 0) continue;
    if (relabel[c] == kNoise) {
      relabel[c] = static_cast<int>(result.n_clusters++);
      result.stability.push_back(stability[c]);
    }
    result.labels[p] = relabel[c];
  }
  return result;
}

}  // namespace litmap::topics
