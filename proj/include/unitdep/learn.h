#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "unitdep/problem.h"
#include "unitdep/udg.h"
#include "unitdep/units.h"

namespace unitdep {

// Sparse feature counts keyed by name. Ordered so extraction output is
// byte-identical across runs.
class FeatureVector {
 public:
  void add(const std::string& name, double value = 1.0);
  // Adds every feature of `other` under "prefix" + name.
  void add_all(const FeatureVector& other, const std::string& prefix = "");

  const std::map<std::string, double>& entries() const { return entries_; }
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  double get(const std::string& name) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  FeatureVector& operator+=(const FeatureVector& other);
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::map<std::string, double> entries_;
};

// Feature-family switches for the vertex and edge classifiers.
struct FeatureFlags {
  bool rule = true;
  bool context = true;
};

// Per-problem analysis shared by all feature extractors.
class FeatureContext {
 public:
  explicit FeatureContext(const Problem& problem);

  const Problem& problem() const { return *problem_; }
  const QuantityUnit& unit(int vertex) const { return units_.at(static_cast<std::size_t>(vertex)); }
  // Window, POS and question n-gram features of one vertex.
  const FeatureVector& context(int vertex) const {
    return context_.at(static_cast<std::size_t>(vertex));
  }

 private:
  const Problem* problem_;
  std::vector<QuantityUnit> units_;
  std::vector<FeatureVector> context_;
};

FeatureVector vertex_features(const FeatureContext& ctx, int vertex, FeatureFlags flags = {});
// Requires vi < vj.
FeatureVector edge_features(const FeatureContext& ctx, int vi, int vj, FeatureFlags flags = {});
// Context features only; the irrelevance and LCA classifiers ignore flags.
FeatureVector relevance_features(const FeatureContext& ctx, int quantity);
// Requires qi < qj.
FeatureVector lca_features(const FeatureContext& ctx, int qi, int qj);

inline FeatureVector vertex_features(const Problem& p, int vertex, FeatureFlags flags = {}) {
  return vertex_features(FeatureContext(p), vertex, flags);
}
inline FeatureVector edge_features(const Problem& p, int vi, int vj, FeatureFlags flags = {}) {
  return edge_features(FeatureContext(p), vi, vj, flags);
}

struct TrainOptions {
  int epochs = 10;
  std::uint64_t seed = 1;

  friend bool operator==(const TrainOptions&, const TrainOptions&) = default;
};

struct Example {
  FeatureVector features;
  int label = 0;  // index into the model's label set
};

// Multiclass linear model: score(fv, l) = sum_f fv[f] * w[l, f]. Trained by
// the averaged perceptron with margin 1.
class LinearModel {
 public:
  LinearModel() = default;
  explicit LinearModel(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_labels() const { return labels_.size(); }
  // Throws std::invalid_argument for unknown labels.
  int label_index(std::string_view label) const;

  double score(const FeatureVector& fv, int label) const;
  double score(const FeatureVector& fv, std::string_view label) const;
  std::vector<double> scores(const FeatureVector& fv) const;
  // Highest scoring label; ties go to the lower index.
  int predict(const FeatureVector& fv) const;

  double weight(std::string_view label, const std::string& feature) const;
  void set_weight(std::string_view label, const std::string& feature, double w);
  std::size_t num_features() const { return weights_.size(); }

  // Deterministic given options.seed. Throws std::invalid_argument on an
  // empty example list or an out-of-range label.
  void train(const std::vector<Example>& examples, const TrainOptions& options);
  const TrainOptions& options() const { return options_; }

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::vector<double>> weights_;
  TrainOptions options_;
};

inline const std::vector<std::string>& vertex_labels() {
  static const std::vector<std::string> l = {"NotRate", "Rate"};
  return l;
}
const std::vector<std::string>& edge_labels();
inline const std::vector<std::string>& relevance_labels() {
  static const std::vector<std::string> l = {"Relevant", "Irrelevant"};
  return l;
}
const std::vector<std::string>& lca_labels();

struct ClassifierSuite {
  LinearModel vertex{vertex_labels()};
  LinearModel edge{edge_labels()};
  LinearModel irrelevance{relevance_labels()};
  LinearModel lca{lca_labels()};
  FeatureFlags flags;

  nlohmann::json to_json() const;
  static ClassifierSuite from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  // Throws DataError on unreadable or malformed files.
  static ClassifierSuite load(const std::string& path);
};

// Trains all four classifiers on problems with gold trees. Vertex and edge
// labels come from the derived annotation.
ClassifierSuite train_suite(const std::vector<Problem>& problems, FeatureFlags flags = {},
                            const TrainOptions& options = {});

}  // namespace unitdep
