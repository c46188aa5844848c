#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcprune {

// Sorted set of internal vertex ids.
struct VertexSet {
  std::vector<int> members;  // sorted ascending, no duplicates

  VertexSet() = default;
  explicit VertexSet(std::vector<int> ids) : members(std::move(ids)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }

  int size() const { return static_cast<int>(members.size()); }
  bool empty() const { return members.empty(); }

  bool contains(int v) const {
    return std::binary_search(members.begin(), members.end(), v);
  }

  bool operator==(const VertexSet& o) const { return members == o.members; }
};

// Immutable undirected simple graph in compressed adjacency form.
// Internal ids are dense 0..n-1; labels holds the original external ids so
// results can be reported in the caller's vocabulary after re-indexing.
struct Graph {
  int n = 0;
  long long m = 0;
  std::vector<std::vector<int>> adj;  // sorted ascending per vertex
  std::vector<int64_t> labels;

  int degree(int v) const { return static_cast<int>(adj[v].size()); }

  bool has_edge(int u, int v) const {
    const auto& a = adj[u].size() <= adj[v].size() ? adj[u] : adj[v];
    int w = adj[u].size() <= adj[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), w);
  }

  // edges as internal (u, v) pairs with u < v, lexicographic
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve(static_cast<size_t>(m));
    for (int u = 0; u < n; ++u)
      for (int v : adj[u])
        if (u < v) e.emplace_back(u, v);
    return e;
  }

  // full-scan structural check: symmetry, sortedness, no loops, m consistent
  bool is_consistent() const {
    long long half = 0;
    for (int u = 0; u < n; ++u) {
      const auto& a = adj[u];
      if (!std::is_sorted(a.begin(), a.end())) return false;
      if (std::adjacent_find(a.begin(), a.end()) != a.end()) return false;
      for (int v : a) {
        if (v < 0 || v >= n || v == u) return false;
        if (!std::binary_search(adj[v].begin(), adj[v].end(), u)) return false;
      }
      half += static_cast<long long>(a.size());
    }
    return half == 2 * m && static_cast<int>(labels.size()) == n;
  }
};

struct GraphBuildStats {
  long long self_loops_dropped = 0;
  long long duplicate_edges_dropped = 0;
};

// Build from edges over external labels. If universe is non-null it fixes
// the vertex set (isolated vertices retained); otherwise the vertices are
// exactly the endpoint labels seen. External ids are compacted to dense
// internal ids in ascending label order.
inline Graph graph_from_label_edges(
    const std::vector<std::pair<int64_t, int64_t>>& label_edges,
    const std::vector<int64_t>* universe = nullptr,
    GraphBuildStats* stats = nullptr) {
  std::vector<int64_t> labels;
  if (universe) {
    labels = *universe;
  } else {
    labels.reserve(label_edges.size() * 2);
    for (const auto& [a, b] : label_edges) {
      labels.push_back(a);
      labels.push_back(b);
    }
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::map<int64_t, int> index;
  for (size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);

  Graph g;
  g.n = static_cast<int>(labels.size());
  g.labels = labels;
  g.adj.assign(g.n, {});

  GraphBuildStats st;
  for (const auto& [a, b] : label_edges) {
    if (a == b) {
      ++st.self_loops_dropped;
      continue;
    }
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      throw std::out_of_range("edge endpoint outside the declared vertex set");
    g.adj[ia->second].push_back(ib->second);
    g.adj[ib->second].push_back(ia->second);
  }
  for (int v = 0; v < g.n; ++v) {
    auto& a = g.adj[v];
    std::sort(a.begin(), a.end());
    size_t before = a.size();
    a.erase(std::unique(a.begin(), a.end()), a.end());
    st.duplicate_edges_dropped += static_cast<long long>(before - a.size());
    g.m += static_cast<long long>(a.size());
  }
  st.duplicate_edges_dropped /= 2;  // counted from both endpoints
  g.m /= 2;
  if (stats) *stats = st;
  return g;
}

// Convenience builder over internal ids; labels default to 0..n-1.
inline Graph graph_from_internal(int n, const std::vector<std::pair<int, int>>& edges,
                                 std::vector<int64_t> labels = {}) {
  if (labels.empty()) {
    labels.resize(n);
    for (int i = 0; i < n; ++i) labels[i] = i;
  }
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("label table size must equal n");
  Graph g;
  g.n = n;
  g.labels = std::move(labels);
  g.adj.assign(n, {});
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::out_of_range("edge endpoint out of range");
    if (u == v) continue;
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (int v = 0; v < n; ++v) {
    auto& a = g.adj[v];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    g.m += static_cast<long long>(a.size());
  }
  g.m /= 2;
  return g;
}

inline Graph induced_subgraph(const Graph& g, const VertexSet& keep) {
  std::vector<int> remap(g.n, -1);
  for (int i = 0; i < keep.size(); ++i) {
    int v = keep.members[i];
    if (v < 0 || v >= g.n) throw std::out_of_range("vertex id out of range");
    remap[v] = i;
  }
  Graph h;
  h.n = keep.size();
  h.adj.assign(h.n, {});
  h.labels.resize(h.n);
  for (int i = 0; i < h.n; ++i) {
    int v = keep.members[i];
    h.labels[i] = g.labels[v];
    for (int u : g.adj[v])
      if (remap[u] >= 0) h.adj[i].push_back(remap[u]);  // stays sorted
    h.m += static_cast<long long>(h.adj[i].size());
  }
  h.m /= 2;
  return h;
}

// Same vertex set, minus the given edges. Unknown or repeated pairs are
// ignored. Used by the edge-chromatic rule consumers.
inline Graph without_edges(const Graph& g,
                           const std::vector<std::pair<int, int>>& drop) {
  std::vector<std::pair<int, int>> norm;
  norm.reserve(drop.size());
  for (auto [u, v] : drop) {
    if (u > v) std::swap(u, v);
    norm.emplace_back(u, v);
  }
  std::sort(norm.begin(), norm.end());
  norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
  auto dropped = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    return std::binary_search(norm.begin(), norm.end(), std::make_pair(u, v));
  };
  Graph h;
  h.n = g.n;
  h.labels = g.labels;
  h.adj.assign(g.n, {});
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (!dropped(u, v)) h.adj[u].push_back(v);
  for (int v = 0; v < g.n; ++v) h.m += static_cast<long long>(h.adj[v].size());
  h.m /= 2;
  return h;
}

inline double edge_density(const Graph& g) {
  if (g.n < 2)
    throw std::invalid_argument("edge density undefined for graphs with n < 2");
  return static_cast<double>(g.m) /
         (static_cast<double>(g.n) * (g.n - 1) / 2.0);
}

}  // namespace mcprune
