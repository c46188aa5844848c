#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mcprune/bitset.hpp"
#include "mcprune/graph.hpp"
#include "mcprune/kcore.hpp"

namespace mcprune {

// omega, the complete list of maximum cliques, and their vertex union.
// Cliques are stored over internal ids, each sorted ascending, the list in
// lexicographic order, so equal inputs give bytewise equal results.
struct CliqueSet {
  int omega = 0;
  std::vector<std::vector<int>> cliques;
  VertexSet covered;
};

struct SolveBudget {
  double seconds = std::numeric_limits<double>::infinity();
  uint64_t max_nodes = std::numeric_limits<uint64_t>::max();
};

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded(uint64_t nodes, double elapsed)
      : std::runtime_error("solver budget exceeded after " + std::to_string(nodes) +
                           " nodes, " + std::to_string(elapsed) + " s"),
        nodes(nodes),
        elapsed_seconds(elapsed) {}
  uint64_t nodes;
  double elapsed_seconds;
};

inline bool is_clique(const Graph& g, const VertexSet& s) {
  for (int v : s.members)
    if (v < 0 || v >= g.n) throw std::out_of_range("vertex id out of range");
  for (size_t i = 0; i < s.members.size(); ++i)
    for (size_t j = i + 1; j < s.members.size(); ++j)
      if (!g.has_edge(s.members[i], s.members[j])) return false;
  return true;
}

namespace detail {

inline void canonicalize(CliqueSet& cs) {
  for (auto& c : cs.cliques) std::sort(c.begin(), c.end());
  std::sort(cs.cliques.begin(), cs.cliques.end());
  cs.cliques.erase(std::unique(cs.cliques.begin(), cs.cliques.end()), cs.cliques.end());
  std::vector<int> u;
  for (const auto& c : cs.cliques) u.insert(u.end(), c.begin(), c.end());
  cs.covered = VertexSet(std::move(u));
}

// Branch and bound over bitset candidate sets with a greedy-coloring upper
// bound (Tomita style). Vertices are renumbered by descending core number
// up front. Enumeration variant: the bound keeps branches that can still
// tie the incumbent size, and every best-size clique reached at an empty
// candidate set is collected.
class EnumerationSearch {
 public:
  EnumerationSearch(const Graph& g, const SolveBudget& budget)
      : g_(g), n_(g.n), budget_(budget) {
    CoreDecomposition cores = core_numbers(g);
    orig_.resize(n_);
    std::iota(orig_.begin(), orig_.end(), 0);
    std::sort(orig_.begin(), orig_.end(), [&](int a, int b) {
      if (cores.core[a] != cores.core[b]) return cores.core[a] > cores.core[b];
      return a < b;
    });
    std::vector<int> rank(n_);
    for (int i = 0; i < n_; ++i) rank[orig_[i]] = i;
    nb_.assign(n_, Bitset(n_));
    for (int v = 0; v < n_; ++v)
      for (int u : g.adj[v]) nb_[rank[v]].set(rank[u]);

    int depth_cap = n_ + 2;
    cand_.assign(depth_cap, Bitset(n_));
    uncolored_.assign(depth_cap, Bitset(n_));
    classbuf_.assign(depth_cap, Bitset(n_));
    order_.resize(depth_cap);
    colors_.resize(depth_cap);
    start_ = std::chrono::steady_clock::now();
  }

  CliqueSet run() {
    seed_incumbent();
    Bitset all(n_);
    all.fill_first(n_);
    cand_[0] = all;
    expand(0);

    CliqueSet cs;
    cs.omega = best_;
    cs.cliques.reserve(found_.size());
    for (const auto& c : found_) {
      std::vector<int> clique;
      clique.reserve(c.size());
      for (int v : c) clique.push_back(orig_[v]);
      cs.cliques.push_back(std::move(clique));
    }
    canonicalize(cs);
    return cs;
  }

 private:
  void seed_incumbent() {
    // greedy clique: repeatedly take the candidate with most candidate
    // neighbors; seeds the bound without touching the enumeration
    Bitset cand(n_);
    cand.fill_first(n_);
    int size = 0;
    while (cand.any()) {
      int pick = -1, pickdeg = -1;
      cand.for_each([&](int v) {
        int d = nb_[v].intersect_count(cand);
        if (d > pickdeg) {
          pickdeg = d;
          pick = v;
        }
      });
      ++size;
      cand &= nb_[pick];
    }
    best_ = size;
  }

  void check_budget() {
    ++nodes_;
    if (nodes_ > budget_.max_nodes) throw_budget();
    if ((nodes_ & 1023) == 0 &&
        budget_.seconds != std::numeric_limits<double>::infinity() &&
        elapsed() > budget_.seconds)
      throw_budget();
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  [[noreturn]] void throw_budget() { throw BudgetExceeded(nodes_, elapsed()); }

  // Greedy coloring of the candidate set; emits vertices grouped by color,
  // ascending, into order_[depth]/colors_[depth].
  void color_sort(int depth) {
    auto& order = order_[depth];
    auto& colors = colors_[depth];
    order.clear();
    colors.clear();
    Bitset& left = uncolored_[depth];
    Bitset& cls = classbuf_[depth];
    left = cand_[depth];
    int color = 0;
    while (left.any()) {
      ++color;
      cls = left;
      while (true) {
        int v = cls.find_first();
        if (v < 0) break;
        order.push_back(v);
        colors.push_back(color);
        left.reset(v);
        cls.reset(v);
        cls.and_not(nb_[v]);
      }
    }
  }

  void expand(int depth) {
    check_budget();
    Bitset& P = cand_[depth];
    if (P.none()) {
      record();
      return;
    }
    color_sort(depth);
    const auto& order = order_[depth];
    const auto& colors = colors_[depth];
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      int v = order[i];
      if (static_cast<int>(current_.size()) + colors[i] < best_) return;
      P.reset(v);
      Bitset::intersect(P, nb_[v], cand_[depth + 1]);
      current_.push_back(v);
      expand(depth + 1);
      current_.pop_back();
    }
  }

  void record() {
    int size = static_cast<int>(current_.size());
    if (size < best_) return;
    if (size > best_) {
      best_ = size;
      found_.clear();
    }
    found_.push_back(current_);
  }

  const Graph& g_;
  int n_;
  SolveBudget budget_;
  std::chrono::steady_clock::time_point start_;
  uint64_t nodes_ = 0;
  int best_ = 0;
  std::vector<int> orig_;
  std::vector<Bitset> nb_;
  std::vector<Bitset> cand_, uncolored_, classbuf_;
  std::vector<std::vector<int>> order_, colors_;
  std::vector<int> current_;
  std::vector<std::vector<int>> found_;
};

}  // namespace detail

// Exact omega and the complete list of maximum cliques, in canonical order.
// Exceeding the budget is an error, never a partial answer: downstream
// training labels must be exact.
inline CliqueSet enumerate_max_cliques(const Graph& g, const SolveBudget& budget = {}) {
  if (g.n == 0) throw std::invalid_argument("cannot solve the empty graph");
  detail::EnumerationSearch search(g, budget);
  return search.run();
}

// Exhaustive subset search, reference semantics for testing the solver.
inline CliqueSet brute_force_enumerate(const Graph& g) {
  if (g.n == 0) throw std::invalid_argument("cannot solve the empty graph");
  if (g.n > 20) throw std::invalid_argument("brute force capped at n <= 20");
  int n = g.n;
  std::vector<uint32_t> mask(n, 0);
  for (int v = 0; v < n; ++v)
    for (int u : g.adj[v]) mask[v] |= uint32_t{1} << u;

  CliqueSet cs;
  std::vector<uint32_t> hits;
  for (uint32_t s = 1; s < (uint32_t{1} << n); ++s) {
    int pc = std::popcount(s);
    if (pc < cs.omega) continue;
    bool ok = true;
    for (uint32_t rest = s; rest && ok;) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      if ((s & ~(mask[v] | (uint32_t{1} << v))) != 0) ok = false;
    }
    if (!ok) continue;
    if (pc > cs.omega) {
      cs.omega = pc;
      hits.clear();
    }
    hits.push_back(s);
  }
  for (uint32_t s : hits) {
    std::vector<int> clique;
    for (uint32_t rest = s; rest;) {
      clique.push_back(std::countr_zero(rest));
      rest &= rest - 1;
    }
    cs.cliques.push_back(std::move(clique));
  }
  detail::canonicalize(cs);
  return cs;
}

// --- reporting ---

inline std::string clique_report_text(const Graph& g, const CliqueSet& cs,
                                      bool include_cliques = true) {
  std::ostringstream out;
  out << "omega=" << cs.omega << " count=" << cs.cliques.size() << '\n';
  if (include_cliques)
    for (const auto& c : cs.cliques) {
      for (size_t i = 0; i < c.size(); ++i)
        out << (i ? " " : "") << g.labels[c[i]];
      out << '\n';
    }
  return out.str();
}

inline nlohmann::json clique_set_to_json(const Graph& g, const CliqueSet& cs,
                                         bool include_cliques = true) {
  nlohmann::json j;
  j["omega"] = cs.omega;
  j["count"] = cs.cliques.size();
  std::vector<int64_t> covered;
  for (int v : cs.covered.members) covered.push_back(g.labels[v]);
  j["covered"] = covered;
  if (include_cliques) {
    auto arr = nlohmann::json::array();
    for (const auto& c : cs.cliques) {
      std::vector<int64_t> labels;
      for (int v : c) labels.push_back(g.labels[v]);
      arr.push_back(labels);
    }
    j["cliques"] = std::move(arr);
  }
  return j;
}

inline std::vector<int64_t> covered_labels_from_json(const nlohmann::json& j) {
  if (!j.contains("covered")) throw std::runtime_error("clique set file: missing covered");
  return j["covered"].get<std::vector<int64_t>>();
}

// inverse of clique_set_to_json for the same graph (labels mapped back to ids)
inline CliqueSet clique_set_from_json(const nlohmann::json& j, const Graph& g) {
  std::unordered_map<int64_t, int> by_label;
  by_label.reserve(g.labels.size());
  for (int v = 0; v < g.n; ++v) by_label[g.labels[v]] = v;
  auto to_id = [&](int64_t label) {
    auto it = by_label.find(label);
    if (it == by_label.end())
      throw std::runtime_error("clique set file references unknown vertex " +
                               std::to_string(label));
    return it->second;
  };
  CliqueSet cs;
  cs.omega = j.at("omega").get<int>();
  if (j.contains("cliques")) {
    for (const auto& arr : j["cliques"]) {
      std::vector<int> c;
      for (const auto& label : arr) c.push_back(to_id(label.get<int64_t>()));
      std::sort(c.begin(), c.end());
      cs.cliques.push_back(std::move(c));
    }
    detail::canonicalize(cs);
  } else {
    for (int64_t label : covered_labels_from_json(j))
      cs.covered.members.push_back(to_id(label));
    std::sort(cs.covered.members.begin(), cs.covered.members.end());
  }
  return cs;
}

}  // namespace mcprune
