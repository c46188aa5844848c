#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "mcprune/graph.hpp"

namespace mcprune {

struct ParseError : std::runtime_error {
  ParseError(const std::string& where, int line, const std::string& what)
      : std::runtime_error(where + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

struct EmptyGraphError : ParseError {
  explicit EmptyGraphError(const std::string& where)
      : ParseError(where, 0, "graph has no vertices") {}
};

enum class GraphFormat { edge_list, matrix_market, automatic };

struct LoadResult {
  Graph graph;
  GraphBuildStats stats;
  GraphFormat format = GraphFormat::edge_list;
};

namespace detail {

inline bool is_blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

inline bool parse_id(const std::string& tok, int64_t& out) {
  if (tok.empty()) return false;
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  try {
    out = std::stoll(tok);
  } catch (const std::out_of_range&) {
    return false;
  }
  return true;
}

}  // namespace detail

// Edge list: one "u v" pair per line, whitespace separated, non-negative
// integer ids; '%' and '#' start comment lines. The vertex set is exactly
// the ids that appear.
inline LoadResult read_edge_list(std::istream& in, const std::string& name) {
  std::vector<std::pair<int64_t, int64_t>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    size_t first = line.find_first_not_of(" \t\r");
    if (line[first] == '%' || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string ta, tb, rest;
    ls >> ta >> tb;
    int64_t a, b;
    if (!detail::parse_id(ta, a) || !detail::parse_id(tb, b))
      throw ParseError(name, lineno, "expected two non-negative integers: '" + line + "'");
    if (ls >> rest)
      throw ParseError(name, lineno, "trailing tokens after edge: '" + rest + "'");
    edges.emplace_back(a, b);
  }
  if (edges.empty()) throw EmptyGraphError(name);
  LoadResult r;
  r.graph = graph_from_label_edges(edges, nullptr, &r.stats);
  r.format = GraphFormat::edge_list;
  return r;
}

// MatrixMarket coordinate format, 1-based indices. Accepted header:
//   %%MatrixMarket matrix coordinate {pattern|integer|real} {symmetric|general|skew-symmetric}
// Values, when present, are ignored; the dimension header fixes the vertex
// set, so isolated vertices survive the load.
inline LoadResult read_matrix_market(std::istream& in, const std::string& name) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError(name, 1, "missing MatrixMarket header");
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    for (auto* s : {&object, &format, &field, &symmetry})
      for (char& c : *s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (banner != "%%MatrixMarket")
      throw ParseError(name, 1, "not a MatrixMarket file");
    if (object != "matrix" || format != "coordinate")
      throw ParseError(name, 1, "only 'matrix coordinate' files are supported");
    if (field != "pattern" && field != "integer" && field != "real")
      throw ParseError(name, 1, "unsupported field type '" + field + "'");
    if (symmetry != "symmetric" && symmetry != "general" && symmetry != "skew-symmetric")
      throw ParseError(name, 1, "unsupported symmetry '" + symmetry + "'");
  }

  int64_t rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line[line.find_first_not_of(" \t\r")] == '%') continue;
    std::istringstream ds(line);
    if (!(ds >> rows >> cols >> nnz))
      throw ParseError(name, lineno, "malformed dimension line: '" + line + "'");
    break;
  }
  if (rows < 0) throw ParseError(name, lineno, "missing dimension line");
  int64_t nverts = std::max(rows, cols);
  if (nverts == 0) throw EmptyGraphError(name);

  std::vector<std::pair<int64_t, int64_t>> edges;
  int64_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line[line.find_first_not_of(" \t\r")] == '%') continue;
    std::istringstream es(line);
    int64_t i, j;
    if (!(es >> i >> j))
      throw ParseError(name, lineno, "malformed entry: '" + line + "'");
    if (i < 1 || i > nverts || j < 1 || j > nverts)
      throw ParseError(name, lineno, "index out of range: '" + line + "'");
    edges.emplace_back(i, j);
    ++seen;
  }
  if (nnz >= 0 && seen != nnz)
    throw ParseError(name, lineno,
                     "entry count " + std::to_string(seen) + " does not match header " +
                         std::to_string(nnz));

  std::vector<int64_t> universe(static_cast<size_t>(nverts));
  for (int64_t i = 0; i < nverts; ++i) universe[static_cast<size_t>(i)] = i + 1;

  LoadResult r;
  r.graph = graph_from_label_edges(edges, &universe, &r.stats);
  r.format = GraphFormat::matrix_market;
  return r;
}

inline LoadResult read_graph(std::istream& in, GraphFormat fmt, const std::string& name) {
  if (fmt == GraphFormat::automatic) {
    // sniff the banner, then restart
    std::string first;
    std::getline(in, first);
    in.clear();
    in.seekg(0);
    fmt = first.rfind("%%MatrixMarket", 0) == 0 ? GraphFormat::matrix_market
                                                : GraphFormat::edge_list;
  }
  return fmt == GraphFormat::matrix_market ? read_matrix_market(in, name)
                                           : read_edge_list(in, name);
}

inline LoadResult load_graph(const std::string& path,
                             GraphFormat fmt = GraphFormat::automatic) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph(in, fmt, path);
}

// Edge list in external labels; loading it back yields the same structure.
inline void write_graph(const Graph& g, std::ostream& out) {
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v) out << g.labels[u] << ' ' << g.labels[v] << '\n';
}

inline void write_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  write_graph(g, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mcprune
