#pragma once

#include <chrono>
#include <span>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "mcprune/clique.hpp"
#include "mcprune/features.hpp"
#include "mcprune/learn.hpp"

namespace mcprune {

enum class Strategy { CC, IC };

inline const char* strategy_name(Strategy s) {
  return s == Strategy::CC ? "CC" : "IC";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "CC" || s == "cc") return Strategy::CC;
  if (s == "IC" || s == "ic") return Strategy::IC;
  throw std::invalid_argument("unknown strategy: " + s);
}

struct StageConfig {
  int stages = 1;
  Strategy strategy = Strategy::CC;
  double q = 0.95;
  double d = 0.0;  // IC per-stage increment
  uint64_t seed = 1;

  double threshold(int stage) const {  // 1-based
    return strategy == Strategy::CC ? q : q + (stage - 1) * d;
  }
  void validate() const {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    if (!(q > 0.5 && q < 1.0))
      throw std::invalid_argument("q must lie in (0.5, 1)");
    if (strategy == Strategy::IC) {
      if (d < 0.0) throw std::invalid_argument("d must be >= 0");
      if (threshold(stages) > 1.0)
        throw std::invalid_argument("IC thresholds exceed 1 at the last stage");
    }
  }
};

// Scores how confidently a vertex belongs to the prunable class. The entity
// argument is the vertex's external label, so oracle stubs can look a vertex
// up in ground truth regardless of how many times the graph was re-compacted.
struct StageScorer {
  virtual ~StageScorer() = default;
  virtual std::vector<std::string> expected_features() const { return {}; }
  virtual double negative_probability(int64_t entity,
                                      std::span<const double> x) const = 0;
};

struct LogisticScorer final : StageScorer {
  const StageModel* model;
  explicit LogisticScorer(const StageModel& m) : model(&m) {}
  std::vector<std::string> expected_features() const override {
    return model->feature_names;
  }
  double negative_probability(int64_t, std::span<const double> x) const override {
    return predict_negative(*model, x);
  }
};

// probability 1 for anything outside the keep set, 0 inside
struct OracleScorer final : StageScorer {
  std::unordered_set<int64_t> keep;
  OracleScorer() = default;
  OracleScorer(const Graph& g, const CliqueSet& truth) {
    for (int v : truth.covered.members) keep.insert(g.labels[v]);
  }
  double negative_probability(int64_t entity, std::span<const double>) const override {
    return keep.contains(entity) ? 0.0 : 1.0;
  }
};

struct ConstantScorer final : StageScorer {
  double value;
  explicit ConstantScorer(double v) : value(v) {}
  double negative_probability(int64_t, std::span<const double>) const override {
    return value;
  }
};

namespace detail {

// Removal needs strictly more confidence than the threshold; exactly q stays.
inline VertexSet survivors_from_scores(const Graph& g, const FeatureMatrix& feats,
                                       const StageScorer& scorer, double threshold) {
  auto expected = scorer.expected_features();
  if (!expected.empty() && expected != feats.names)
    throw std::invalid_argument("model feature names do not match computed features");
  VertexSet out;
  for (int v = 0; v < g.n; ++v)
    if (!(scorer.negative_probability(g.labels[v], feats.row(v)) > threshold))
      out.members.push_back(v);
  return out;
}

}  // namespace detail

inline VertexSet run_stage(const Graph& g, const StageScorer& scorer,
                           double threshold, int threads = 1) {
  FeatureMatrix feats = vertex_features(g, threads);
  return detail::survivors_from_scores(g, feats, scorer, threshold);
}

inline VertexSet run_stage(const Graph& g, const StageModel& m, double threshold,
                           int threads = 1) {
  return run_stage(g, LogisticScorer(m), threshold, threads);
}

struct StageRecord {
  int stage = 0;  // 1-based
  double threshold = 0.0;
  std::vector<int64_t> survivors;  // external labels, sorted
  int vertices_removed = 0;
  long long edges_removed = 0;
};

struct PruneReport {
  long long original_vertices = 0;
  long long original_edges = 0;
  long long final_vertices = 0;
  long long final_edges = 0;
  std::vector<StageRecord> stages;
  long long vertices_removed_total = 0;
  long long edges_removed_total = 0;
  double vertex_prune_ratio = 0.0;  // removed / original
  double edge_prune_ratio = 0.0;
  std::vector<std::pair<std::string, double>> timings;  // seconds per phase
};

// Timings vary run to run, so they stay out of the serialized report unless
// asked for; everything else is reproducible byte for byte.
inline nlohmann::json prune_report_to_json(const PruneReport& r,
                                           bool include_timings = false) {
  nlohmann::json j;
  j["original"] = {{"vertices", r.original_vertices}, {"edges", r.original_edges}};
  j["final"] = {{"vertices", r.final_vertices}, {"edges", r.final_edges}};
  j["stages"] = nlohmann::json::array();
  for (const auto& s : r.stages) {
    nlohmann::json js;
    js["stage"] = s.stage;
    js["threshold"] = s.threshold;
    js["vertices_removed"] = s.vertices_removed;
    js["edges_removed"] = s.edges_removed;
    js["survivors"] = s.survivors;
    j["stages"].push_back(std::move(js));
  }
  j["totals"] = {{"vertices_removed", r.vertices_removed_total},
                 {"edges_removed", r.edges_removed_total},
                 {"vertex_prune_ratio", r.vertex_prune_ratio},
                 {"edge_prune_ratio", r.edge_prune_ratio}};
  if (include_timings) {
    j["timings"] = nlohmann::json::array();
    for (const auto& [phase, secs] : r.timings)
      j["timings"].push_back({{"phase", phase}, {"seconds", secs}});
  }
  return j;
}

struct PruneResult {
  Graph graph;
  PruneReport report;
};

// Stage after stage: score, drop, re-induce, recompute features. An empty or
// edgeless intermediate graph ends the loop early instead of erroring; an
// empty scorer list is the identity transform.
inline PruneResult multi_stage_prune(const Graph& g,
                                     std::span<const StageScorer* const> scorers,
                                     const StageConfig& cfg, int threads = 1) {
  cfg.validate();
  size_t used = std::min<size_t>(scorers.size(), static_cast<size_t>(cfg.stages));

  PruneResult out;
  out.graph = g;
  PruneReport& rep = out.report;
  rep.original_vertices = g.n;
  rep.original_edges = g.m;

  auto total_start = std::chrono::steady_clock::now();
  for (size_t i = 1; i <= used; ++i) {
    Graph& cur = out.graph;
    if (cur.n == 0 || cur.m == 0) break;
    auto t0 = std::chrono::steady_clock::now();
    double thr = cfg.threshold(static_cast<int>(i));
    FeatureMatrix feats = vertex_features(cur, threads);
    VertexSet keep = detail::survivors_from_scores(cur, feats, *scorers[i - 1], thr);
    Graph next = induced_subgraph(cur, keep);

    StageRecord rec;
    rec.stage = static_cast<int>(i);
    rec.threshold = thr;
    rec.survivors = next.labels;
    std::sort(rec.survivors.begin(), rec.survivors.end());
    rec.vertices_removed = cur.n - next.n;
    rec.edges_removed = cur.m - next.m;
    rep.stages.push_back(std::move(rec));

    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    rep.timings.emplace_back("stage_" + std::to_string(i), dt.count());
    cur = std::move(next);
  }
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - total_start;
  rep.timings.emplace_back("total", dt.count());

  rep.final_vertices = out.graph.n;
  rep.final_edges = out.graph.m;
  rep.vertices_removed_total = rep.original_vertices - rep.final_vertices;
  rep.edges_removed_total = rep.original_edges - rep.final_edges;
  if (rep.original_vertices > 0)
    rep.vertex_prune_ratio = static_cast<double>(rep.vertices_removed_total) /
                             static_cast<double>(rep.original_vertices);
  if (rep.original_edges > 0)
    rep.edge_prune_ratio = static_cast<double>(rep.edges_removed_total) /
                           static_cast<double>(rep.original_edges);
  return out;
}

inline PruneResult multi_stage_prune(const Graph& g,
                                     const std::vector<StageModel>& models,
                                     const StageConfig& cfg, int threads = 1) {
  cfg.validate();
  size_t used = std::min<size_t>(models.size(), static_cast<size_t>(cfg.stages));
  for (size_t i = 0; i < used; ++i)
    if (models[i].stage_index != static_cast<int>(i + 1))
      throw std::invalid_argument(
          "model order does not match stage order: position " +
          std::to_string(i + 1) + " holds stage " +
          std::to_string(models[i].stage_index));
  std::vector<LogisticScorer> scorers;
  scorers.reserve(models.size());
  for (const auto& m : models) scorers.emplace_back(m);
  std::vector<const StageScorer*> ptrs;
  ptrs.reserve(scorers.size());
  for (const auto& s : scorers) ptrs.push_back(&s);
  return multi_stage_prune(g, ptrs, cfg, threads);
}

// --- multi-stage training ---

struct CorpusItem {
  Graph graph;
  CliqueSet truth;
  uint64_t seed = 0;
};

class TrainingExhaustedError : public std::runtime_error {
 public:
  explicit TrainingExhaustedError(int stage)
      : std::runtime_error("training exhausted at stage " + std::to_string(stage) +
                           ": every corpus graph is degenerate"),
        stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

// Stage i trains on what survived stages 1..i-1, pooled across the corpus and
// relabeled from the original ground truth. Graphs that degenerate (empty,
// edgeless, or single-class survivors) drop out with a warning; losing them
// all is an error.
inline std::vector<StageModel> multi_stage_train(
    std::span<const CorpusItem> corpus, const StageConfig& cfg,
    const Hyperparams& hp, int threads = 1,
    std::vector<std::string>* warnings = nullptr) {
  cfg.validate();
  if (corpus.empty()) throw std::invalid_argument("empty corpus");

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  size_t ng = corpus.size();
  std::vector<char> alive(ng, 1);
  std::vector<VertexSet> survivors(ng);
  std::vector<std::unordered_set<int64_t>> covered_labels(ng);
  for (size_t ci = 0; ci < ng; ++ci) {
    const Graph& g = corpus[ci].graph;
    survivors[ci].members.resize(g.n);
    std::iota(survivors[ci].members.begin(), survivors[ci].members.end(), 0);
    for (int v : corpus[ci].truth.covered.members)
      covered_labels[ci].insert(g.labels[v]);
  }

  std::vector<StageModel> models;
  for (int stage = 1; stage <= cfg.stages; ++stage) {
    uint64_t stage_seed = derive_seed(cfg.seed, static_cast<uint64_t>(stage));

    TrainingSet pooled;
    pooled.feature_names = vertex_feature_names();
    std::vector<Graph> subs(ng);
    std::vector<FeatureMatrix> featcache(ng);
    for (size_t ci = 0; ci < ng; ++ci) {
      if (!alive[ci]) continue;
      subs[ci] = induced_subgraph(corpus[ci].graph, survivors[ci]);
      const Graph& sub = subs[ci];
      if (sub.n == 0 || sub.m == 0) {
        warn("stage " + std::to_string(stage) + ": graph " + std::to_string(ci) +
             " dropped (no usable survivors)");
        alive[ci] = 0;
        continue;
      }
      CliqueSet restricted;
      for (int j = 0; j < sub.n; ++j)
        if (covered_labels[ci].contains(sub.labels[j]))
          restricted.covered.members.push_back(j);
      if (restricted.covered.members.empty() ||
          restricted.covered.size() == static_cast<size_t>(sub.n)) {
        warn("stage " + std::to_string(stage) + ": graph " + std::to_string(ci) +
             " dropped (single-class survivors)");
        alive[ci] = 0;
        continue;
      }
      featcache[ci] = vertex_features(sub, threads);
      TrainingSet t = build_training_set(sub, restricted, featcache[ci],
                                         static_cast<int64_t>(ci));
      for (auto& s : t.samples) pooled.samples.push_back(std::move(s));
    }
    if (pooled.samples.empty()) throw TrainingExhaustedError(stage);

    TrainingSet balanced = balance(pooled, derive_seed(stage_seed, 1));
    Hyperparams hp_stage = hp;
    hp_stage.seed = derive_seed(stage_seed, 2);
    StageModel model = train_logistic(balanced, hp_stage, stage);

    double thr = cfg.threshold(stage);
    for (size_t ci = 0; ci < ng; ++ci) {
      if (!alive[ci]) continue;
      VertexSet sub_keep =
          detail::survivors_from_scores(subs[ci], featcache[ci],
                                        LogisticScorer(model), thr);
      VertexSet next;
      next.members.reserve(sub_keep.size());
      for (int j : sub_keep.members)
        next.members.push_back(survivors[ci].members[j]);
      survivors[ci] = std::move(next);
    }
    models.push_back(std::move(model));
  }
  return models;
}

// --- evaluation ---

struct EvalReport {
  int omega_original = 0;
  long long count_original = 0;
  int omega_pruned = 0;
  long long count_pruned = 0;
  bool omega_preserved = false;
  bool count_preserved = false;
  double vertex_prune_ratio = 0.0;
  double edge_prune_ratio = 0.0;
};

inline nlohmann::json eval_report_to_json(const EvalReport& r) {
  return {{"omega_original", r.omega_original},
          {"omega_pruned", r.omega_pruned},
          {"omega_preserved", r.omega_preserved},
          {"count_original", r.count_original},
          {"count_pruned", r.count_pruned},
          {"count_preserved", r.count_preserved},
          {"vertex_prune_ratio", r.vertex_prune_ratio},
          {"edge_prune_ratio", r.edge_prune_ratio}};
}

namespace detail {

// pruned must be the subgraph of original induced on pruned's label set
inline void require_induced(const Graph& original, const Graph& pruned) {
  std::unordered_map<int64_t, int> by_label;
  by_label.reserve(original.labels.size());
  for (int v = 0; v < original.n; ++v) by_label[original.labels[v]] = v;

  std::vector<int> orig_id(pruned.n);
  std::vector<char> kept(original.n, 0);
  for (int v = 0; v < pruned.n; ++v) {
    auto it = by_label.find(pruned.labels[v]);
    if (it == by_label.end())
      throw std::invalid_argument("pruned graph has a vertex not in the original");
    orig_id[v] = it->second;
    kept[it->second] = 1;
  }
  for (int v = 0; v < pruned.n; ++v)
    for (int w : pruned.adj[v]) {
      if (w <= v) continue;
      if (!original.has_edge(orig_id[v], orig_id[w]))
        throw std::invalid_argument("pruned graph has an edge not in the original");
    }
  long long inside = 0;
  for (int v = 0; v < original.n; ++v) {
    if (!kept[v]) continue;
    for (int w : original.adj[v]) inside += w > v && kept[w];
  }
  if (inside != pruned.m)
    throw std::invalid_argument("pruned graph is not an induced subgraph");
}

}  // namespace detail

inline EvalReport evaluate_pruning(const Graph& original, const CliqueSet& truth,
                                   const Graph& pruned,
                                   const SolveBudget& budget = {}) {
  detail::require_induced(original, pruned);
  EvalReport r;
  r.omega_original = truth.omega;
  r.count_original = static_cast<long long>(truth.cliques.size());
  if (pruned.n > 0) {
    CliqueSet after = enumerate_max_cliques(pruned, budget);
    r.omega_pruned = after.omega;
    r.count_pruned = static_cast<long long>(after.cliques.size());
  }
  r.omega_preserved = r.omega_pruned == r.omega_original;
  r.count_preserved = r.count_pruned == r.count_original;
  if (original.n > 0)
    r.vertex_prune_ratio = static_cast<double>(original.n - pruned.n) /
                           static_cast<double>(original.n);
  if (original.m > 0)
    r.edge_prune_ratio = static_cast<double>(original.m - pruned.m) /
                         static_cast<double>(original.m);
  return r;
}

}  // namespace mcprune
