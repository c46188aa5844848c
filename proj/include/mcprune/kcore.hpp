#pragma once

#include "mcprune/graph.hpp"

namespace mcprune {

struct CoreDecomposition {
  std::vector<int> core;  // per vertex
  int max_core = 0;
};

// Bucket peeling (Batagelj-Zaversnik), O(n + m), deterministic.
inline CoreDecomposition core_numbers(const Graph& g) {
  CoreDecomposition d;
  d.core.assign(g.n, 0);
  if (g.n == 0) return d;

  int maxdeg = 0;
  std::vector<int> deg(g.n);
  for (int v = 0; v < g.n; ++v) {
    deg[v] = g.degree(v);
    maxdeg = std::max(maxdeg, deg[v]);
  }

  // counting sort of vertices by degree
  std::vector<int> bin(maxdeg + 2, 0);
  for (int v = 0; v < g.n; ++v) ++bin[deg[v]];
  int start = 0;
  for (int dgr = 0; dgr <= maxdeg; ++dgr) {
    int cnt = bin[dgr];
    bin[dgr] = start;
    start += cnt;
  }
  std::vector<int> order(g.n), pos(g.n);
  for (int v = 0; v < g.n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = v;
  }
  for (int dgr = maxdeg; dgr > 0; --dgr) bin[dgr] = bin[dgr - 1];
  bin[0] = 0;

  for (int i = 0; i < g.n; ++i) {
    int v = order[i];
    d.core[v] = deg[v];
    for (int u : g.adj[v]) {
      if (deg[u] > deg[v]) {
        // move u one bucket down: swap with the first vertex of its bucket
        int du = deg[u], pu = pos[u];
        int pw = bin[du], w = order[pw];
        if (u != w) {
          std::swap(order[pu], order[pw]);
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  for (int v = 0; v < g.n; ++v) d.max_core = std::max(d.max_core, d.core[v]);
  return d;
}

// Survivors of the classic preprocessing step: keep v iff core(v) >= k-1.
// With k equal to the exact clique number this is the omega-oracle baseline.
inline VertexSet omega_oracle_prune(const Graph& g, int k) {
  if (k < 1) throw std::invalid_argument("clique-size estimate must be >= 1");
  CoreDecomposition d = core_numbers(g);
  std::vector<int> keep;
  for (int v = 0; v < g.n; ++v)
    if (d.core[v] >= k - 1) keep.push_back(v);
  return VertexSet(std::move(keep));
}

}  // namespace mcprune
