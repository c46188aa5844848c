#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "mcprune/graph_io.hpp"
#include "mcprune/pipeline.hpp"
#include "mcprune/rng.hpp"

namespace mcprune {

enum class CorpusKind { planted_sparse, planted_dense };

inline const char* corpus_kind_name(CorpusKind k) {
  return k == CorpusKind::planted_sparse ? "planted-sparse" : "planted-dense";
}

inline CorpusKind parse_corpus_kind(const std::string& s) {
  if (s == "planted-sparse" || s == "sparse") return CorpusKind::planted_sparse;
  if (s == "planted-dense" || s == "dense") return CorpusKind::planted_dense;
  throw std::invalid_argument("unknown corpus kind: " + s);
}

// planted sizes sit above the expected natural clique number of each family
inline int planted_auto(CorpusKind kind, int n) {
  double lg = std::log2(static_cast<double>(n));
  if (kind == CorpusKind::planted_sparse)
    return std::max(6, static_cast<int>(std::llround(lg)) + 3);
  return static_cast<int>(std::ceil(2.0 * lg)) + 2;
}

namespace detail {

// preferential attachment, 2 links per arriving vertex, triangle seed
inline Graph sparse_background(int n, Rng& rng) {
  std::set<std::pair<int, int>> edges{{0, 1}, {0, 2}, {1, 2}};
  std::vector<int> endpoints{0, 1, 0, 2, 1, 2};
  for (int t = 3; t < n; ++t) {
    std::vector<int> chosen;
    while (chosen.size() < 2) {
      int pick = endpoints[static_cast<size_t>(rng.below(endpoints.size()))];
      if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end())
        chosen.push_back(pick);
    }
    for (int c : chosen) {
      edges.insert({c, t});
      endpoints.push_back(c);
      endpoints.push_back(t);
    }
  }
  std::vector<std::pair<int, int>> list(edges.begin(), edges.end());
  return graph_from_internal(n, list);
}

inline Graph dense_background(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return graph_from_internal(n, edges);
}

inline Graph plant_clique(const Graph& g, const std::vector<int>& members) {
  std::set<std::pair<int, int>> edges;
  for (int v = 0; v < g.n; ++v)
    for (int w : g.adj[v])
      if (w > v) edges.insert({v, w});
  for (size_t i = 0; i < members.size(); ++i)
    for (size_t j = i + 1; j < members.size(); ++j)
      edges.insert({std::min(members[i], members[j]),
                    std::max(members[i], members[j])});
  std::vector<std::pair<int, int>> list(edges.begin(), edges.end());
  return graph_from_internal(g.n, list);
}

}  // namespace detail

// Seed-deterministic labeled instances: a random background with a clique
// planted above its natural clique number, ground truth from the exact
// solver. The n caps keep the per-graph solve trivially cheap.
inline std::vector<CorpusItem> generate_corpus(CorpusKind kind, int count, int n,
                                               uint64_t seed, int planted = 0,
                                               const SolveBudget& budget = {}) {
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  if (n < 10) throw std::invalid_argument("n too small for a planted-clique instance");
  int cap = kind == CorpusKind::planted_sparse ? 150 : 80;
  if (n > cap)
    throw std::invalid_argument("n exceeds the exact-solving cap (" +
                                std::to_string(cap) + ") for " +
                                corpus_kind_name(kind));
  if (planted == 0) planted = planted_auto(kind, n);
  if (planted < 3 || planted > n)
    throw std::invalid_argument("planted clique size out of range");

  std::vector<CorpusItem> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    CorpusItem item;
    item.seed = derive_seed(seed, static_cast<uint64_t>(i));
    Rng rng(item.seed);
    Graph bg = kind == CorpusKind::planted_sparse
                   ? detail::sparse_background(n, rng)
                   : detail::dense_background(n, 0.5, rng);
    std::vector<int> members = rng.sample(n, planted);
    item.graph = detail::plant_clique(bg, members);
    item.truth = enumerate_max_cliques(item.graph, budget);
    out.push_back(std::move(item));
  }
  return out;
}

// --- corpus on disk: one edge list + one truth file per graph ---

inline std::string corpus_basename(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "graph_%03d", index);
  return buf;
}

inline void save_corpus(const std::vector<CorpusItem>& corpus,
                        const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < corpus.size(); ++i) {
    std::string base = dir + "/" + corpus_basename(static_cast<int>(i));
    write_graph(corpus[i].graph, base + ".edges");
    std::ofstream out(base + ".truth.json");
    if (!out) throw std::runtime_error("cannot write " + base + ".truth.json");
    nlohmann::json j = clique_set_to_json(corpus[i].graph, corpus[i].truth);
    j["seed"] = corpus[i].seed;
    out << j.dump(2) << '\n';
  }
}

inline std::vector<CorpusItem> load_corpus(const std::string& dir) {
  std::vector<std::filesystem::path> edge_files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".edges") edge_files.push_back(entry.path());
  std::sort(edge_files.begin(), edge_files.end());
  if (edge_files.empty())
    throw std::runtime_error("no .edges files in corpus dir: " + dir);

  std::vector<CorpusItem> out;
  for (const auto& ef : edge_files) {
    CorpusItem item;
    item.graph = load_graph(ef.string(), GraphFormat::edge_list).graph;
    std::filesystem::path tf = ef;
    tf.replace_extension(".truth.json");
    std::ifstream in(tf);
    if (!in) throw std::runtime_error("missing truth file: " + tf.string());
    nlohmann::json j;
    in >> j;
    item.truth = clique_set_from_json(j, item.graph);
    if (j.contains("seed")) item.seed = j["seed"].get<uint64_t>();
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace mcprune
