#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mcprune/coloring.hpp"
#include "mcprune/corpus.hpp"
#include "mcprune/features.hpp"
#include "mcprune/graph_io.hpp"
#include "mcprune/kcore.hpp"
#include "mcprune/learn.hpp"
#include "mcprune/pipeline.hpp"

namespace {

using namespace mcprune;

constexpr uint64_t kDefaultSeed = 1729;  // fixed, never drawn from entropy

struct GlobalOpts {
  uint64_t seed = kDefaultSeed;
  int threads = 1;
  std::string format = "auto";
  bool pretty = false;
};

GraphFormat parse_format(const std::string& s) {
  if (s == "auto") return GraphFormat::automatic;
  if (s == "edge-list" || s == "edges") return GraphFormat::edge_list;
  if (s == "mm" || s == "matrix-market") return GraphFormat::matrix_market;
  throw std::invalid_argument("unknown format: " + s);
}

Graph load_input(const std::string& path, const GlobalOpts& g) {
  return load_graph(path, parse_format(g.format)).graph;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::string json_line(const nlohmann::json& j, bool pretty) {
  return j.dump(pretty ? 2 : -1) + "\n";
}

// stage_1.json, stage_2.json, ... as far as the directory provides
std::vector<StageModel> load_model_dir(const std::string& dir, int max_stages) {
  std::vector<StageModel> models;
  for (int i = 1; i <= max_stages; ++i) {
    std::string path = dir + "/stage_" + std::to_string(i) + ".json";
    if (!std::filesystem::exists(path)) break;
    models.push_back(load_model(path));
    if (models.back().stage_index != i)
      throw std::invalid_argument("model file " + path + " carries stage index " +
                                  std::to_string(models.back().stage_index));
  }
  return models;
}

struct StageFlags {
  int stages = 1;
  std::string strategy = "CC";
  double q = 0.95;
  double d = 0.0;

  StageConfig to_config(uint64_t seed) const {
    StageConfig cfg;
    cfg.stages = stages;
    cfg.strategy = parse_strategy(strategy);
    cfg.q = q;
    cfg.d = d;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }
};

void add_stage_flags(CLI::App* cmd, StageFlags& f) {
  cmd->add_option("--stages", f.stages, "number of pruning stages")
      ->capture_default_str();
  cmd->add_option("--strategy", f.strategy, "threshold strategy, CC or IC")
      ->capture_default_str();
  cmd->add_option("--q", f.q, "base confidence threshold in (0.5, 1)")
      ->capture_default_str();
  cmd->add_option("--d", f.d, "per-stage threshold increment (IC)")
      ->capture_default_str();
}

struct BudgetFlags {
  double seconds = 0.0;  // 0 = unlimited
  uint64_t max_nodes = 0;

  SolveBudget to_budget() const {
    SolveBudget b;
    if (seconds > 0.0) b.seconds = seconds;
    if (max_nodes > 0) b.max_nodes = max_nodes;
    return b;
  }
};

void add_budget_flags(CLI::App* cmd, BudgetFlags& f) {
  cmd->add_option("--budget-seconds", f.seconds, "solver wall-clock budget, 0 = none")
      ->capture_default_str();
  cmd->add_option("--max-nodes", f.max_nodes, "solver search-node budget, 0 = none")
      ->capture_default_str();
}

CliqueSet solve_truth(const Graph& g, const std::string& truth_path,
                      const SolveBudget& budget) {
  if (truth_path.empty()) return enumerate_max_cliques(g, budget);
  std::ifstream in(truth_path);
  if (!in) throw std::runtime_error("cannot open truth file: " + truth_path);
  nlohmann::json j;
  in >> j;
  return clique_set_from_json(j, g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum clique enumeration with learned search-space pruning"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker thread cap")->capture_default_str();
  app.add_option("--format", g.format, "input graph format: auto, edge-list, mm")
      ->capture_default_str();
  app.add_flag("--pretty", g.pretty, "human-readable report formatting");

  // solve
  auto* solve = app.add_subcommand("solve", "enumerate all maximum cliques");
  std::string solve_path, solve_out;
  bool solve_cliques = false, solve_json = false;
  BudgetFlags solve_budget;
  solve->add_option("graph", solve_path, "input graph file")->required();
  solve->add_flag("--cliques", solve_cliques, "list every maximum clique");
  solve->add_flag("--json", solve_json, "JSON report instead of text");
  solve->add_option("--out", solve_out, "write the report to a file");
  add_budget_flags(solve, solve_budget);
  solve->callback([&] {
    Graph graph = load_input(solve_path, g);
    CliqueSet cs = enumerate_max_cliques(graph, solve_budget.to_budget());
    std::string text;
    if (solve_json) {
      text = json_line(clique_set_to_json(graph, cs, solve_cliques), g.pretty);
    } else if (g.pretty) {
      text = "omega = " + std::to_string(cs.omega) + "\nmaximum cliques = " +
             std::to_string(cs.cliques.size()) + "\n";
      if (solve_cliques) text += clique_report_text(graph, cs, true);
    } else {
      text = clique_report_text(graph, cs, solve_cliques);
    }
    emit(text, solve_out);
  });

  // features
  auto* features = app.add_subcommand("features", "per-vertex or per-edge feature CSV");
  std::string feat_path, feat_out;
  bool feat_edges = false;
  features->add_option("graph", feat_path, "input graph file")->required();
  features->add_flag("--edges", feat_edges, "edge features instead of vertex features");
  features->add_option("--out", feat_out, "write the CSV to a file");
  features->callback([&] {
    Graph graph = load_input(feat_path, g);
    FeatureMatrix fm;
    if (feat_edges) {
      Coloring c = greedy_coloring(graph);
      fm = edge_features(graph, c, g.threads);
    } else {
      fm = vertex_features(graph, g.threads);
    }
    std::ostringstream csv;
    write_feature_csv(fm, graph, csv);
    emit(csv.str(), feat_out);
  });

  // train
  auto* train = app.add_subcommand("train", "fit one model per pruning stage");
  std::string train_corpus, train_gen, train_outdir;
  int train_count = 20, train_n = 60, train_planted = 0;
  StageFlags train_stage;
  Hyperparams train_hp;
  train->add_option("--corpus", train_corpus, "corpus directory (edge lists + truth)");
  train->add_option("--gen", train_gen, "generate a corpus: planted-sparse or planted-dense");
  train->add_option("--count", train_count, "generated corpus size")->capture_default_str();
  train->add_option("--n", train_n, "generated graph order")->capture_default_str();
  train->add_option("--planted", train_planted, "planted clique size, 0 = auto")
      ->capture_default_str();
  train->add_option("--out-dir", train_outdir, "directory for model files")->required();
  add_stage_flags(train, train_stage);
  train->add_option("--epochs", train_hp.epochs, "SGD epochs")->capture_default_str();
  train->add_option("--lr", train_hp.learning_rate, "SGD base learning rate")
      ->capture_default_str();
  train->add_option("--l2", train_hp.l2, "L2 regularization strength")
      ->capture_default_str();
  train->callback([&] {
    if (train_corpus.empty() == train_gen.empty())
      throw std::invalid_argument("train needs exactly one of --corpus and --gen");
    StageConfig cfg = train_stage.to_config(g.seed);
    std::vector<CorpusItem> corpus =
        train_corpus.empty()
            ? generate_corpus(parse_corpus_kind(train_gen), train_count, train_n,
                              g.seed, train_planted)
            : load_corpus(train_corpus);

    std::vector<std::string> warnings;
    std::vector<StageModel> models =
        multi_stage_train(corpus, cfg, train_hp, g.threads, &warnings);

    std::filesystem::create_directories(train_outdir);
    std::ostringstream log;
    log << "corpus: " << corpus.size() << " graphs\n";
    log << "config: stages=" << cfg.stages << " strategy=" << strategy_name(cfg.strategy)
        << " q=" << cfg.q << " d=" << cfg.d << " seed=" << cfg.seed << "\n";
    log << "hyperparams: epochs=" << train_hp.epochs << " lr=" << train_hp.learning_rate
        << " l2=" << train_hp.l2 << "\n";
    for (const auto& w : warnings) log << "warning: " << w << "\n";
    for (const auto& m : models) {
      std::string name = "stage_" + std::to_string(m.stage_index) + ".json";
      save_model(m, train_outdir + "/" + name);
      log << "wrote " << name << "\n";
    }
    std::ofstream lf(train_outdir + "/train_log.txt");
    if (!lf) throw std::runtime_error("cannot write training log");
    lf << log.str();
    std::cout << log.str();
  });

  // prune
  auto* prune = app.add_subcommand("prune", "multi-stage learned pruning");
  std::string prune_path, prune_models, prune_oracle, prune_out, prune_report;
  bool prune_timings = false;
  StageFlags prune_stage;
  prune->add_option("graph", prune_path, "input graph file")->required();
  prune->add_option("--models", prune_models, "model directory from train");
  prune->add_option("--oracle", prune_oracle, "clique-set file; prune to its covered set");
  prune->add_option("--out", prune_out, "write the pruned graph as an edge list");
  prune->add_option("--report", prune_report, "write the report to a file");
  prune->add_flag("--timings", prune_timings, "include phase timings in the report");
  add_stage_flags(prune, prune_stage);
  prune->callback([&] {
    if (prune_models.empty() == prune_oracle.empty())
      throw std::invalid_argument("prune needs exactly one of --models and --oracle");
    StageConfig cfg = prune_stage.to_config(g.seed);
    Graph graph = load_input(prune_path, g);

    PruneResult res;
    if (!prune_oracle.empty()) {
      std::ifstream in(prune_oracle);
      if (!in) throw std::runtime_error("cannot open clique-set file: " + prune_oracle);
      nlohmann::json j;
      in >> j;
      OracleScorer oracle;
      for (int64_t label : covered_labels_from_json(j)) oracle.keep.insert(label);
      std::vector<const StageScorer*> scorers(cfg.stages, &oracle);
      res = multi_stage_prune(graph, scorers, cfg, g.threads);
    } else {
      std::vector<StageModel> models = load_model_dir(prune_models, cfg.stages);
      res = multi_stage_prune(graph, models, cfg, g.threads);
    }
    if (!prune_out.empty()) write_graph(res.graph, prune_out);
    emit(json_line(prune_report_to_json(res.report, prune_timings), g.pretty),
         prune_report);
  });

  // eval
  auto* eval = app.add_subcommand("eval", "compare a pruned graph against ground truth");
  std::string eval_orig, eval_pruned, eval_truth, eval_out;
  BudgetFlags eval_budget;
  eval->add_option("original", eval_orig, "original graph file")->required();
  eval->add_option("pruned", eval_pruned, "pruned graph file")->required();
  eval->add_option("--truth", eval_truth, "clique-set file for the original");
  eval->add_option("--out", eval_out, "write the report to a file");
  add_budget_flags(eval, eval_budget);
  eval->callback([&] {
    Graph original = load_input(eval_orig, g);
    Graph pruned = load_input(eval_pruned, g);
    SolveBudget budget = eval_budget.to_budget();
    CliqueSet truth = solve_truth(original, eval_truth, budget);
    EvalReport r = evaluate_pruning(original, truth, pruned, budget);
    if (g.pretty) {
      std::ostringstream out;
      out << "omega: " << r.omega_original << " -> " << r.omega_pruned
          << (r.omega_preserved ? " (preserved)" : " (LOST)") << "\n"
          << "maximum cliques: " << r.count_original << " -> " << r.count_pruned
          << (r.count_preserved ? " (preserved)" : " (LOST)") << "\n"
          << "vertex prune ratio: " << r.vertex_prune_ratio << "\n"
          << "edge prune ratio: " << r.edge_prune_ratio << "\n";
      emit(out.str(), eval_out);
    } else {
      emit(json_line(eval_report_to_json(r), false), eval_out);
    }
  });

  // kcore
  auto* kcore = app.add_subcommand("kcore", "core-number pruning baseline");
  std::string kcore_path, kcore_out;
  int kcore_k = 0;
  bool kcore_exact = false;
  BudgetFlags kcore_budget;
  kcore->add_option("graph", kcore_path, "input graph file")->required();
  kcore->add_option("--k", kcore_k, "target clique size; keeps core numbers >= k-1");
  kcore->add_flag("--exact-omega", kcore_exact, "solve for omega and use it as k");
  kcore->add_option("--out", kcore_out, "write the pruned graph as an edge list");
  add_budget_flags(kcore, kcore_budget);
  kcore->callback([&] {
    if (kcore_exact == (kcore_k > 0))
      throw std::invalid_argument("kcore needs exactly one of --k and --exact-omega");
    Graph graph = load_input(kcore_path, g);
    nlohmann::json j;
    int k = kcore_k;
    if (kcore_exact) {
      CliqueSet cs = enumerate_max_cliques(graph, kcore_budget.to_budget());
      k = cs.omega;
      j["omega"] = cs.omega;
    }
    VertexSet keep = omega_oracle_prune(graph, k);
    Graph pruned = induced_subgraph(graph, keep);
    if (!kcore_out.empty()) write_graph(pruned, kcore_out);
    j["k"] = k;
    j["original"] = {{"vertices", graph.n}, {"edges", graph.m}};
    j["final"] = {{"vertices", pruned.n}, {"edges", pruned.m}};
    j["vertex_prune_ratio"] =
        graph.n > 0 ? static_cast<double>(graph.n - pruned.n) / graph.n : 0.0;
    j["edge_prune_ratio"] =
        graph.m > 0 ? static_cast<double>(graph.m - pruned.m) / graph.m : 0.0;
    emit(json_line(j, g.pretty), "");
  });

  // gen
  auto* gen = app.add_subcommand("gen", "generate a labeled planted-clique corpus");
  std::string gen_kind = "planted-sparse", gen_outdir;
  int gen_count = 20, gen_n = 60, gen_planted = 0;
  gen->add_option("--kind", gen_kind, "planted-sparse or planted-dense")
      ->capture_default_str();
  gen->add_option("--count", gen_count, "number of graphs")->capture_default_str();
  gen->add_option("--n", gen_n, "graph order")->capture_default_str();
  gen->add_option("--planted", gen_planted, "planted clique size, 0 = auto")
      ->capture_default_str();
  gen->add_option("--out-dir", gen_outdir, "output directory")->required();
  gen->callback([&] {
    std::vector<CorpusItem> corpus =
        generate_corpus(parse_corpus_kind(gen_kind), gen_count, gen_n, g.seed,
                        gen_planted);
    save_corpus(corpus, gen_outdir);
    nlohmann::json j;
    j["graphs"] = corpus.size();
    j["dir"] = gen_outdir;
    emit(json_line(j, g.pretty), "");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // help and friends
    app.exit(e);
    return 4;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mcprune::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TrainingExhaustedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
