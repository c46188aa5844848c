#pragma once

#include <numeric>

#include "mcprune/graph.hpp"

namespace mcprune {

struct Coloring {
  std::vector<int> color;  // per vertex, 1..k
  int k = 0;
};

// Welsh-Powell greedy: vertices in descending degree order (ties broken by
// internal id ascending, so the result is stable across runs and platforms),
// each vertex takes the smallest color absent from its colored neighbors.
inline Coloring greedy_coloring(const Graph& g) {
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return a < b;
  });

  Coloring c;
  c.color.assign(g.n, 0);
  std::vector<int> used(g.n + 2, -1);  // color -> last vertex index that blocked it
  for (int idx = 0; idx < g.n; ++idx) {
    int v = order[idx];
    for (int u : g.adj[v])
      if (c.color[u] > 0) used[c.color[u]] = idx;
    int col = 1;
    while (used[col] == idx) ++col;
    c.color[v] = col;
    c.k = std::max(c.k, col);
  }
  return c;
}

inline bool is_proper(const Graph& g, const Coloring& c) {
  if (static_cast<int>(c.color.size()) != g.n) return false;
  for (int v = 0; v < g.n; ++v) {
    if (c.color[v] < 1 || c.color[v] > c.k) return false;
    for (int u : g.adj[v])
      if (c.color[u] == c.color[v]) return false;
  }
  return true;
}

}  // namespace mcprune
