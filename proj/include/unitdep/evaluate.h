#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unitdep/infer.h"
#include "unitdep/learn.h"
#include "unitdep/problem.h"

namespace unitdep {

struct EvalConfig {
  int folds = 5;
  std::uint64_t seed = 1;
  double dev_fraction = 0.2;
  std::size_t beam = 200;
  TrainOptions train;
  LambdaGrid grid;
  FeatureFlags flags;
  // Fixed values replace the tuned ones for every system that uses them.
  std::optional<double> lambda_vertex;
  std::optional<double> lambda_edge;
  // Run the feature ablations (two extra trainings per fold).
  bool feature_ablations = true;
};

// Solve accuracy of one configuration.
struct SystemResult {
  std::string name;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t subset_correct = 0;  // problems with a distractor or a gold rate
  std::size_t subset_total = 0;
  std::vector<double> fold_accuracy;
  std::vector<std::string> failures;  // ids of unsolved test problems

  // Mean over folds.
  double accuracy() const;
  // Pooled over folds.
  double subset_accuracy() const;
};

// Classifier quality against the derived gold graphs of the test problems.
struct ClassifierResult {
  std::string name;
  std::size_t vertex_correct = 0, vertex_total = 0;
  std::size_t edge_correct = 0, edge_total = 0;
  std::size_t udg_exact = 0, udg_total = 0;

  double vertex_accuracy() const;
  double edge_accuracy() const;
  double udg_accuracy() const;
};

struct EvalReport {
  std::size_t num_problems = 0;
  int folds = 0;
  std::uint64_t seed = 0;
  double noise_rate = 0;
  // full, base, no-vertex, no-edge, then no-rule and no-context when run.
  std::vector<SystemResult> systems;
  // all-features, then no-rule and no-context when run.
  std::vector<ClassifierResult> classifiers;
  std::vector<ScalingParams> fold_params;  // full system, per fold

  // Throws std::out_of_range for unknown names.
  const SystemResult& system(std::string_view name) const;
  const ClassifierResult& classifier(std::string_view name) const;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

// k-fold cross validation. Every problem needs a gold tree, plus rate
// annotation when the tree has x or ÷.
EvalReport run_evaluation(const std::vector<Problem>& problems, const EvalConfig& config);

}  // namespace unitdep
