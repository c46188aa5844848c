#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcprune/clique.hpp"
#include "mcprune/features.hpp"
#include "mcprune/rng.hpp"

namespace mcprune {

struct TrainingSample {
  std::vector<double> x;
  int label = 0;  // 1 = in some maximum clique, 0 = prunable
  int64_t graph_id = 0;
  int64_t entity = 0;
};

struct TrainingSet {
  std::vector<std::string> feature_names;
  std::vector<TrainingSample> samples;
  bool balance_warning = false;  // set when a class was empty at balancing

  size_t dim() const { return feature_names.size(); }
  long long count_label(int y) const {
    long long c = 0;
    for (const auto& s : samples) c += s.label == y;
    return c;
  }
};

// Positive examples are the vertices of some maximum clique, negatives the
// rest; one sample per vertex.
inline TrainingSet build_training_set(const Graph& g, const CliqueSet& truth,
                                      const FeatureMatrix& feats,
                                      int64_t graph_id = 0) {
  if (feats.subject != FeatureMatrix::Subject::vertex ||
      feats.rows() != static_cast<size_t>(g.n))
    throw std::invalid_argument("feature matrix does not match the graph");
  TrainingSet t;
  t.feature_names = feats.names;
  t.samples.reserve(g.n);
  for (int v = 0; v < g.n; ++v) {
    TrainingSample s;
    auto row = feats.row(v);
    s.x.assign(row.begin(), row.end());
    s.label = truth.covered.contains(v) ? 1 : 0;
    s.graph_id = graph_id;
    s.entity = g.labels[v];
    t.samples.push_back(std::move(s));
  }
  return t;
}

// Under-sample the larger class, uniformly without replacement, to the
// size of the smaller one. An empty class yields an empty set with the
// warning flag raised.
inline TrainingSet balance(const TrainingSet& t, uint64_t seed) {
  std::vector<int> pos, neg;
  for (int i = 0; i < static_cast<int>(t.samples.size()); ++i)
    (t.samples[i].label == 1 ? pos : neg).push_back(i);

  TrainingSet out;
  out.feature_names = t.feature_names;
  if (pos.empty() || neg.empty()) {
    out.balance_warning = true;
    return out;
  }
  Rng rng(seed);
  auto pick = [&](std::vector<int>& cls, size_t target) {
    if (cls.size() > target) {
      rng.shuffle(cls);
      cls.resize(target);
      std::sort(cls.begin(), cls.end());
    }
  };
  size_t target = std::min(pos.size(), neg.size());
  pick(pos, target);
  pick(neg, target);
  std::vector<int> keep;
  keep.reserve(2 * target);
  keep.insert(keep.end(), pos.begin(), pos.end());
  keep.insert(keep.end(), neg.begin(), neg.end());
  std::sort(keep.begin(), keep.end());
  for (int i : keep) out.samples.push_back(t.samples[i]);
  return out;
}

// drop one feature column everywhere (ablation experiments)
inline TrainingSet drop_feature(const TrainingSet& t, const std::string& name) {
  int col = -1;
  for (size_t i = 0; i < t.feature_names.size(); ++i)
    if (t.feature_names[i] == name) col = static_cast<int>(i);
  if (col < 0) throw std::invalid_argument("unknown feature: " + name);
  TrainingSet out;
  out.feature_names = t.feature_names;
  out.feature_names.erase(out.feature_names.begin() + col);
  out.balance_warning = t.balance_warning;
  out.samples = t.samples;
  for (auto& s : out.samples) s.x.erase(s.x.begin() + col);
  return out;
}

struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // population convention; constant columns get 1
};

inline Scaler fit_scaler(const TrainingSet& t) {
  if (t.samples.empty()) throw std::invalid_argument("cannot fit scaler on empty set");
  size_t d = t.dim();
  Scaler sc;
  sc.mean.assign(d, 0.0);
  sc.stddev.assign(d, 0.0);
  for (const auto& s : t.samples)
    for (size_t j = 0; j < d; ++j) sc.mean[j] += s.x[j];
  for (size_t j = 0; j < d; ++j) sc.mean[j] /= static_cast<double>(t.samples.size());
  for (const auto& s : t.samples)
    for (size_t j = 0; j < d; ++j) {
      double dd = s.x[j] - sc.mean[j];
      sc.stddev[j] += dd * dd;
    }
  for (size_t j = 0; j < d; ++j) {
    sc.stddev[j] = std::sqrt(sc.stddev[j] / static_cast<double>(t.samples.size()));
    if (sc.stddev[j] == 0.0) sc.stddev[j] = 1.0;
  }
  return sc;
}

inline std::vector<double> apply_scaler(std::span<const double> x, const Scaler& sc) {
  std::vector<double> z(x.size());
  for (size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - sc.mean[j]) / sc.stddev[j];
  return z;
}

struct Hyperparams {
  int epochs = 30;
  double learning_rate = 0.05;  // decays as 1/sqrt(step)
  double l2 = 1e-4;
  uint64_t seed = 1;
};

// Per-stage logistic classifier: weights over standardized features plus
// the scaler fitted at training time.
struct StageModel {
  int version = 1;
  int stage_index = 1;
  std::vector<std::string> feature_names;
  Scaler scaler;
  std::vector<double> weights;
  double bias = 0.0;
  Hyperparams hp;
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// probability of the NEGATIVE (prunable) class, matching the pruning
// threshold semantics
inline double predict_negative(const StageModel& m, std::span<const double> x) {
  if (x.size() != m.weights.size())
    throw std::invalid_argument("feature dimension does not match model");
  std::vector<double> z = apply_scaler(x, m.scaler);
  double acc = m.bias;
  for (size_t j = 0; j < z.size(); ++j) acc += m.weights[j] * z[j];
  return 1.0 - sigmoid(acc);
}

inline double logistic_loss(const StageModel& m, const TrainingSet& t) {
  double loss = 0.0;
  for (const auto& s : t.samples) {
    double p_pos = 1.0 - predict_negative(m, s.x);
    p_pos = std::clamp(p_pos, 1e-12, 1.0 - 1e-12);
    loss += s.label ? -std::log(p_pos) : -std::log(1.0 - p_pos);
  }
  double reg = 0.0;
  for (double w : m.weights) reg += w * w;
  return loss / static_cast<double>(t.samples.size()) + 0.5 * m.hp.l2 * reg;
}

// L2-regularized logistic regression by SGD over shuffled epochs. The
// global step drives the 1/sqrt(t) rate decay; everything is seeded, so
// retraining reproduces the model bit for bit.
inline StageModel train_logistic(const TrainingSet& t, const Hyperparams& hp,
                                 int stage_index = 1) {
  if (t.samples.empty()) throw std::invalid_argument("empty training set");
  if (t.count_label(0) == 0 || t.count_label(1) == 0)
    throw std::invalid_argument("training set must contain both classes");

  StageModel m;
  m.stage_index = stage_index;
  m.feature_names = t.feature_names;
  m.scaler = fit_scaler(t);
  m.weights.assign(t.dim(), 0.0);
  m.hp = hp;

  std::vector<std::vector<double>> z;
  z.reserve(t.samples.size());
  for (const auto& s : t.samples) z.push_back(apply_scaler(s.x, m.scaler));

  Rng rng(hp.seed);
  std::vector<int> order(t.samples.size());
  std::iota(order.begin(), order.end(), 0);
  uint64_t step = 0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    rng.shuffle(order);
    for (int i : order) {
      ++step;
      double lr = hp.learning_rate / std::sqrt(static_cast<double>(step));
      double acc = m.bias;
      for (size_t j = 0; j < m.weights.size(); ++j) acc += m.weights[j] * z[i][j];
      double grad = sigmoid(acc) - t.samples[i].label;
      for (size_t j = 0; j < m.weights.size(); ++j)
        m.weights[j] -= lr * (grad * z[i][j] + hp.l2 * m.weights[j]);
      m.bias -= lr * grad;
    }
  }
  return m;
}

inline double accuracy(const StageModel& m, const std::vector<TrainingSample>& samples) {
  if (samples.empty()) return 0.0;
  long long ok = 0;
  for (const auto& s : samples) {
    int pred = predict_negative(m, s.x) < 0.5 ? 1 : 0;
    ok += pred == s.label;
  }
  return static_cast<double>(ok) / static_cast<double>(samples.size());
}

// k-fold cross validation over pooled samples; returns mean held-out accuracy
inline double cross_validate(const TrainingSet& t, int folds, const Hyperparams& hp,
                             uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  std::vector<int> order(t.samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  double total = 0.0;
  int used = 0;
  for (int f = 0; f < folds; ++f) {
    TrainingSet train, test;
    train.feature_names = test.feature_names = t.feature_names;
    for (size_t i = 0; i < order.size(); ++i) {
      auto& dst = static_cast<int>(i % folds) == f ? test : train;
      dst.samples.push_back(t.samples[order[i]]);
    }
    if (train.count_label(0) == 0 || train.count_label(1) == 0 || test.samples.empty())
      continue;
    StageModel m = train_logistic(train, hp);
    total += accuracy(m, test.samples);
    ++used;
  }
  if (used == 0) throw std::invalid_argument("cross validation degenerate: single-class folds");
  return total / used;
}

// --- persistence ---

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const StageModel& m) {
  nlohmann::json j;
  j["version"] = m.version;
  j["stage_index"] = m.stage_index;
  j["feature_names"] = m.feature_names;
  j["scaler_means"] = m.scaler.mean;
  j["scaler_stds"] = m.scaler.stddev;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["hyperparameters"] = {{"epochs", m.hp.epochs},
                          {"learning_rate", m.hp.learning_rate},
                          {"l2", m.hp.l2}};
  j["seed"] = m.hp.seed;
  return j;
}

inline StageModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("version") || !j["version"].is_number_integer())
    throw std::runtime_error("model file: missing version");
  if (j["version"].get<int>() != kModelFormatVersion)
    throw std::runtime_error("model file: unsupported version " +
                             j["version"].dump());
  StageModel m;
  m.version = j["version"].get<int>();
  m.stage_index = j["stage_index"].get<int>();
  m.feature_names = j["feature_names"].get<std::vector<std::string>>();
  m.scaler.mean = j["scaler_means"].get<std::vector<double>>();
  m.scaler.stddev = j["scaler_stds"].get<std::vector<double>>();
  m.weights = j["weights"].get<std::vector<double>>();
  m.bias = j["bias"].get<double>();
  m.hp.epochs = j["hyperparameters"]["epochs"].get<int>();
  m.hp.learning_rate = j["hyperparameters"]["learning_rate"].get<double>();
  m.hp.l2 = j["hyperparameters"]["l2"].get<double>();
  m.hp.seed = j["seed"].get<uint64_t>();
  if (m.weights.size() != m.feature_names.size() ||
      m.scaler.mean.size() != m.weights.size() ||
      m.scaler.stddev.size() != m.weights.size())
    throw std::runtime_error("model file: inconsistent dimensions");
  return m;
}

inline void save_model(const StageModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(m).dump(2) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline StageModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace mcprune
