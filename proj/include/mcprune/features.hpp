#pragma once

#include <cassert>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include "mcprune/coloring.hpp"
#include "mcprune/graph.hpp"
#include "mcprune/parallel.hpp"

namespace mcprune {

struct DegenerateSpectrumError : std::runtime_error {
  DegenerateSpectrumError()
      : std::runtime_error("eigencentrality undefined on an edgeless graph") {}
};

struct ImproperColoringError : std::invalid_argument {
  ImproperColoringError()
      : std::invalid_argument("supplied coloring is not proper for this graph") {}
};

// Per-vertex or per-edge numeric rows with feature-name metadata. Vertex
// rows follow internal id order, edge rows lexicographic endpoint order.
struct FeatureMatrix {
  enum class Subject { vertex, edge };
  Subject subject = Subject::vertex;
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edge_keys;  // edge subject only
  std::vector<double> values;                  // row-major

  size_t cols() const { return names.size(); }
  size_t rows() const { return names.empty() ? 0 : values.size() / names.size(); }
  std::span<const double> row(size_t i) const {
    return {values.data() + i * cols(), cols()};
  }
  double at(size_t r, size_t c) const { return values[r * cols() + c]; }
  int column_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  }
};

// number of edges among N(v), per vertex
inline std::vector<long long> triangle_counts(const Graph& g, int threads = 1) {
  std::vector<long long> t(g.n, 0);
  int nthreads = std::max(1, threads);
  // per-vertex counting with a neighborhood flag array; each worker owns
  // its own scratch
  auto count_one = [](const Graph& gg, std::vector<uint8_t>& mark, int v) {
    for (int u : gg.adj[v]) mark[u] = 1;
    long long c = 0;
    for (int u : gg.adj[v])
      for (int w : gg.adj[u])
        if (w > u && mark[w]) ++c;
    for (int u : gg.adj[v]) mark[u] = 0;
    return c;
  };
  if (nthreads <= 1 || g.n < 2 * nthreads) {
    std::vector<uint8_t> mark(g.n, 0);
    for (int v = 0; v < g.n; ++v) t[v] = count_one(g, mark, v);
    return t;
  }
  std::vector<std::thread> pool;
  int chunk = (g.n + nthreads - 1) / nthreads;
  for (int w = 0; w < nthreads; ++w) {
    int lo = w * chunk, hi = std::min(g.n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      std::vector<uint8_t> mark(g.n, 0);
      for (int v = lo; v < hi; ++v) t[v] = count_one(g, mark, v);
    });
  }
  for (auto& th : pool) th.join();
  return t;
}

// F4: fraction of neighbor pairs that close a triangle; 0 when deg < 2
inline std::vector<double> lcc_all(const Graph& g, int threads = 1) {
  std::vector<long long> tri = triangle_counts(g, threads);
  std::vector<double> lcc(g.n, 0.0);
  for (int v = 0; v < g.n; ++v) {
    double d = g.degree(v);
    if (d >= 2) lcc[v] = 2.0 * static_cast<double>(tri[v]) / (d * (d - 1.0));
  }
  return lcc;
}

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 50000;
};

// F5: dominant eigenvector of the adjacency matrix. Power iteration from
// the all-ones vector with Euclidean renormalization each step; iterating
// A+I instead of A keeps the same eigenvectors while making the dominant
// eigenvalue strictly largest in magnitude, so bipartite spectra converge
// too. Stops when successive iterates differ by < tol in max norm.
inline std::vector<double> eigencentrality(const Graph& g,
                                           PowerIterationOptions opt = {},
                                           int threads = 1) {
  if (g.m == 0) throw DegenerateSpectrumError();
  std::vector<double> x(g.n, 1.0 / std::sqrt(static_cast<double>(g.n)));
  std::vector<double> y(g.n, 0.0);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    parallel_for(g.n, threads, [&](int v) {
      double s = x[v];
      for (int u : g.adj[v]) s += x[u];
      y[v] = s;
    });
    double norm = 0.0;
    for (int v = 0; v < g.n; ++v) norm += y[v] * y[v];
    norm = std::sqrt(norm);
    double diff = 0.0;
    for (int v = 0; v < g.n; ++v) {
      y[v] /= norm;
      diff = std::max(diff, std::abs(y[v] - x[v]));
    }
    x.swap(y);
    if (diff < opt.tol) break;
  }
  return x;
}

enum class VertexQuantity { degree, lcc };

struct ChiSquareScores {
  std::vector<double> self;
  std::vector<double> neighbor_avg;
};

// F6-F9: per-vertex Pearson chi-square contribution (O-E)^2/E against the
// graph-wide mean of the quantity, plus the neighborhood average of those
// contributions. A zero mean yields all-zero scores.
inline ChiSquareScores chi_square_scores(const Graph& g, VertexQuantity q,
                                         int threads = 1) {
  std::vector<double> observed(g.n);
  if (q == VertexQuantity::degree) {
    for (int v = 0; v < g.n; ++v) observed[v] = g.degree(v);
  } else {
    observed = lcc_all(g, threads);
  }
  double expected = 0.0;
  for (int v = 0; v < g.n; ++v) expected += observed[v];
  expected = g.n > 0 ? expected / g.n : 0.0;

  ChiSquareScores s;
  s.self.assign(g.n, 0.0);
  s.neighbor_avg.assign(g.n, 0.0);
  if (expected == 0.0) return s;
  for (int v = 0; v < g.n; ++v) {
    double d = observed[v] - expected;
    s.self[v] = d * d / expected;
  }
  for (int v = 0; v < g.n; ++v) {
    if (g.degree(v) == 0) continue;
    double acc = 0.0;
    for (int u : g.adj[v]) acc += s.self[u];
    s.neighbor_avg[v] = acc / g.degree(v);
  }
  return s;
}

// F10: distinct colors in N(v) over total colors of the supplied proper
// coloring; the heuristic stand-in for the NP-hard minimum over optimal
// colorings. Isolated vertices score 0.
inline std::vector<double> local_chromatic_density(const Graph& g, const Coloring& c) {
  if (!is_proper(g, c)) throw ImproperColoringError();
  std::vector<double> chi_d(g.n, 0.0);
  std::vector<int> seen(c.k + 1, -1);
  for (int v = 0; v < g.n; ++v) {
    if (g.degree(v) == 0) continue;
    int distinct = 0;
    for (int u : g.adj[v]) {
      if (seen[c.color[u]] != v) {
        seen[c.color[u]] = v;
        ++distinct;
      }
    }
    chi_d[v] = static_cast<double>(distinct) / static_cast<double>(c.k);
  }
  return chi_d;
}

inline const std::vector<std::string>& vertex_feature_names() {
  static const std::vector<std::string> names = {
      "num_vertices",    "num_edges",    "degree",
      "lcc",             "eigencentrality", "chi2_degree",
      "chi2_degree_neighbor_avg", "chi2_lcc", "chi2_lcc_neighbor_avg",
      "local_chromatic_density"};
  return names;
}

inline const std::vector<std::string>& edge_feature_names() {
  static const std::vector<std::string> names = {
      "jaccard",   "dice",       "inverse_log_weighted",
      "cosine",    "avg_lcc",    "avg_degree",
      "avg_eigencentrality", "two_paths", "edge_chromatic_density"};
  return names;
}

// The 10-column vertex feature matrix F1..F10. One greedy coloring per
// call; all columns deterministic for a fixed graph.
inline FeatureMatrix vertex_features(const Graph& g, int threads = 1,
                                     PowerIterationOptions eig_opt = {}) {
  if (g.n == 0) throw std::invalid_argument("vertex features of an empty graph");
  FeatureMatrix f;
  f.subject = FeatureMatrix::Subject::vertex;
  f.names = vertex_feature_names();

  std::vector<double> lcc = lcc_all(g, threads);
  std::vector<double> eig = eigencentrality(g, eig_opt, threads);
  ChiSquareScores qdeg = chi_square_scores(g, VertexQuantity::degree, threads);
  ChiSquareScores qlcc = chi_square_scores(g, VertexQuantity::lcc, threads);
  Coloring col = greedy_coloring(g);
  std::vector<double> chi_d = local_chromatic_density(g, col);

  f.values.resize(static_cast<size_t>(g.n) * 10);
  for (int v = 0; v < g.n; ++v) {
    double* row = f.values.data() + static_cast<size_t>(v) * 10;
    row[0] = g.n;
    row[1] = static_cast<double>(g.m);
    row[2] = g.degree(v);
    row[3] = lcc[v];
    row[4] = eig[v];
    row[5] = qdeg.self[v];
    row[6] = qdeg.neighbor_avg[v];
    row[7] = qlcc.self[v];
    row[8] = qlcc.neighbor_avg[v];
    row[9] = chi_d[v];
  }
  return f;
}

// The 9-column edge feature matrix E1..E9 over the supplied proper
// coloring. Neighborhoods are open, so the Jaccard union counts both
// endpoints (|N(u) u N(v)| = deg u + deg v - |common|).
inline FeatureMatrix edge_features(const Graph& g, const Coloring& c,
                                   int threads = 1,
                                   PowerIterationOptions eig_opt = {}) {
  if (!is_proper(g, c)) throw ImproperColoringError();
  FeatureMatrix f;
  f.subject = FeatureMatrix::Subject::edge;
  f.names = edge_feature_names();
  f.edge_keys = g.edges();
  if (f.edge_keys.empty()) return f;

  std::vector<double> lcc = lcc_all(g, threads);
  std::vector<double> eig = eigencentrality(g, eig_opt, threads);

  int nedges = static_cast<int>(f.edge_keys.size());
  f.values.assign(static_cast<size_t>(nedges) * 9, 0.0);
  parallel_for(nedges, threads, [&](int e) {
    auto [u, v] = f.edge_keys[e];
    double du = g.degree(u), dv = g.degree(v);
    std::vector<int> common;
    std::set_intersection(g.adj[u].begin(), g.adj[u].end(), g.adj[v].begin(),
                          g.adj[v].end(), std::back_inserter(common));
    double cn = static_cast<double>(common.size());
    double inv_log = 0.0;
    for (int w : common) {
      assert(g.degree(w) >= 2);  // adjacent to both endpoints
      inv_log += 1.0 / std::log(static_cast<double>(g.degree(w)));
    }
    std::vector<int> seen;
    int distinct = 0;
    for (int w : common) {
      if (std::find(seen.begin(), seen.end(), c.color[w]) == seen.end()) {
        seen.push_back(c.color[w]);
        ++distinct;
      }
    }
    double* row = f.values.data() + static_cast<size_t>(e) * 9;
    row[0] = cn / (du + dv - cn);
    row[1] = 2.0 * cn / (du + dv);
    row[2] = inv_log;
    row[3] = cn / std::sqrt(du * dv);
    row[4] = (lcc[u] + lcc[v]) / 2.0;
    row[5] = (du + dv) / 2.0;
    row[6] = (eig[u] + eig[v]) / 2.0;
    row[7] = cn;
    row[8] = static_cast<double>(distinct) / static_cast<double>(c.k);
  });
  return f;
}

// The deterministic rule behind E9: an edge whose common neighborhood
// shows fewer than k-2 distinct colors cannot be in any k-clique, so it
// can be deleted without losing one.
inline std::vector<std::pair<int, int>> edge_chromatic_rule(const Graph& g,
                                                            const Coloring& c,
                                                            int k) {
  if (k < 2) throw std::invalid_argument("clique-size estimate must be >= 2");
  if (!is_proper(g, c)) throw ImproperColoringError();
  std::vector<std::pair<int, int>> doomed;
  std::vector<int> seen(c.k + 1, -1);
  int stamp = 0;
  for (int u = 0; u < g.n; ++u) {
    for (int v : g.adj[u]) {
      if (v <= u) continue;
      ++stamp;
      int distinct = 0;
      std::vector<int> common;
      std::set_intersection(g.adj[u].begin(), g.adj[u].end(), g.adj[v].begin(),
                            g.adj[v].end(), std::back_inserter(common));
      for (int w : common)
        if (seen[c.color[w]] != stamp) {
          seen[c.color[w]] = stamp;
          ++distinct;
        }
      if (distinct < k - 2) doomed.emplace_back(u, v);
    }
  }
  return doomed;
}

// --- CSV ---

inline void write_feature_csv(const FeatureMatrix& f, const Graph& g, std::ostream& out) {
  char buf[64];
  if (f.subject == FeatureMatrix::Subject::vertex)
    out << "vertex";
  else
    out << "u,v";
  for (const auto& n : f.names) out << ',' << n;
  out << '\n';
  for (size_t r = 0; r < f.rows(); ++r) {
    if (f.subject == FeatureMatrix::Subject::vertex) {
      out << g.labels[r];
    } else {
      out << g.labels[f.edge_keys[r].first] << ',' << g.labels[f.edge_keys[r].second];
    }
    for (double v : f.row(r)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

// Reads back what write_feature_csv produced. Key columns are recognized
// by header shape.
inline FeatureMatrix read_feature_csv(std::istream& in) {
  FeatureMatrix f;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  std::vector<std::string> header;
  {
    std::string tok;
    std::istringstream hs(line);
    while (std::getline(hs, tok, ',')) header.push_back(tok);
  }
  size_t key_cols;
  if (header.size() >= 1 && header[0] == "vertex") {
    f.subject = FeatureMatrix::Subject::vertex;
    key_cols = 1;
  } else if (header.size() >= 2 && header[0] == "u" && header[1] == "v") {
    f.subject = FeatureMatrix::Subject::edge;
    key_cols = 2;
  } else {
    throw std::runtime_error("unrecognized CSV header");
  }
  f.names.assign(header.begin() + key_cols, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ls, tok, ',')) toks.push_back(tok);
    if (toks.size() != header.size())
      throw std::runtime_error("CSV row width mismatch");
    if (f.subject == FeatureMatrix::Subject::edge)
      f.edge_keys.emplace_back(std::stoi(toks[0]), std::stoi(toks[1]));
    for (size_t i = key_cols; i < toks.size(); ++i)
      f.values.push_back(std::stod(toks[i]));
  }
  return f;
}

}  // namespace mcprune
