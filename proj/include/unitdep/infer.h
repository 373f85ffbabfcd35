#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "unitdep/expr_tree.h"
#include "unitdep/learn.h"
#include "unitdep/problem.h"
#include "unitdep/udg.h"

namespace unitdep {

struct ScalingParams {
  double lambda_udg = 1.0;  // edge weight in standalone Score(G)
  double lambda_rel = 1.0;
  double lambda_vertex = 1.0;
  double lambda_edge = 1.0;

  friend bool operator==(const ScalingParams&, const ScalingParams&) = default;
};

nlohmann::json params_to_json(const ScalingParams& params);
// Missing keys keep their defaults. Throws DataError on non-numeric values.
ScalingParams params_from_json(const nlohmann::json& j);

// Raw classifier scores for one problem. Tests fill these by hand.
class ScoreTables {
 public:
  explicit ScoreTables(int num_quantities);

  int num_quantities() const { return n_; }

  double& vertex_rate(int v) { return vertex_rate_.at(static_cast<std::size_t>(v)); }
  double vertex_rate(int v) const { return vertex_rate_.at(static_cast<std::size_t>(v)); }
  // Pair (i < j) over all n + 1 vertices.
  double& edge(int i, int j, EdgeType t) { return edge_[vertex_pair(i, j)][index(t)]; }
  double edge(int i, int j, EdgeType t) const { return edge_[vertex_pair(i, j)][index(t)]; }
  double& rel(int q) { return rel_.at(static_cast<std::size_t>(q)); }
  double rel(int q) const { return rel_.at(static_cast<std::size_t>(q)); }
  // Pair (i < j) over quantities.
  double& lca(int i, int j, Op op) { return lca_[quantity_pair(i, j)][index(op)]; }
  double lca(int i, int j, Op op) const { return lca_[quantity_pair(i, j)][index(op)]; }

 private:
  template <typename E>
  static std::size_t index(E e) { return static_cast<std::size_t>(e); }
  std::size_t vertex_pair(int i, int j) const;
  std::size_t quantity_pair(int i, int j) const;

  int n_;
  std::vector<double> vertex_rate_;
  std::vector<std::array<double, 6>> edge_;
  std::vector<double> rel_;
  std::vector<std::array<double, 6>> lca_;
};

// Vertex(v, Rate), Edge(vi, vj, l), Rel(q) = score of Irrelevant, and
// LCA(qi, qj, o) from the suite.
ScoreTables compute_score_tables(const Problem& problem, const ClassifierSuite& suite);

// Unscaled sums of the four Score(G, T) terms.
struct ScoreBreakdown {
  double rel = 0;     // sum of Rel(q) over unused quantities
  double lca = 0;     // sum of LCA over used pairs
  double vertex = 0;  // sum of Vertex(v, Rate) over Rate vertices
  double edge = 0;    // sum of Edge over all vertex pairs

  double total(const ScalingParams& p) const {
    return p.lambda_rel * rel + lca + p.lambda_vertex * vertex + p.lambda_edge * edge;
  }
};

ScoreBreakdown tree_breakdown(const ExprTree& tree, const ScoreTables& tables);
ScoreBreakdown graph_breakdown(const UnitDependencyGraph& graph, const ScoreTables& tables);
ScoreBreakdown tuple_breakdown(const ExprTree& tree, const UnitDependencyGraph& graph,
                               const ScoreTables& tables);

// Score(G) = sum of Vertex(v, Rate) over Rate vertices + lambda_udg * edge sum.
double score_udg(const UnitDependencyGraph& graph, const ScoreTables& tables,
                 const ScalingParams& params);
// Score(T) = lambda_rel * Rel sum over unused quantities + LCA sum.
double score_tree(const ExprTree& tree, const ScoreTables& tables, const ScalingParams& params);

// Argmax of Score(G) over structurally valid graphs: exhaustive up to six
// vertices, a beam over vertex labels beyond. Ties go to the
// lexicographically smallest graph.
UnitDependencyGraph predict_udg(const ScoreTables& tables, const ScalingParams& params);
UnitDependencyGraph predict_udg(const Problem& problem, const ClassifierSuite& suite,
                                const ScalingParams& params);

struct ScoredTuple {
  ExprTree tree;
  UnitDependencyGraph graph;
  Rational value;
  double score = 0;
  ScoreBreakdown breakdown;

  nlohmann::json to_json(const Problem* problem = nullptr) const;
};

class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Best consistent graph for one tree; ties go to the lexicographically
// smallest graph.
UnitDependencyGraph best_consistent_graph(const ExprTree& tree, const ScoreTables& tables,
                                          const ScalingParams& params);

// Two-stage search: rank every candidate tree by Score(T) and keep the top
// `beam` (0 keeps all), then attach each kept tree's best consistent graph
// and rank the tuples by Score(G, T). Ties: fewer tree nodes, then the
// tree's prefix form. Returns at most `top` tuples, best first. Throws
// InferenceError when no candidate tree exists.
std::vector<ScoredTuple> rank_tuples(const ScoreTables& tables, std::span<const Rational> values,
                                     const ScalingParams& params, std::size_t beam,
                                     std::size_t top);

ScoredTuple solve_joint(const ScoreTables& tables, std::span<const Rational> values,
                        const ScalingParams& params, std::size_t beam = 200);
ScoredTuple solve_joint(const Problem& problem, const ClassifierSuite& suite,
                        const ScalingParams& params, std::size_t beam = 200);

struct LambdaGrid {
  std::vector<double> rel{0, 0.25, 0.5, 1, 2, 4};
  std::vector<double> vertex{0, 0.25, 0.5, 1, 2, 4};
  std::vector<double> edge{0, 0.25, 0.5, 1, 2, 4};
  std::vector<double> udg{0, 0.25, 0.5, 1, 2, 4};
};

// One development problem reduced to what tuning needs.
struct TuningItem {
  ScoreTables tables;
  std::vector<Rational> values;
  Rational answer;
  std::optional<UnitDependencyGraph> gold_graph;  // for lambda_udg
};

// Grid search: (lambda_rel, lambda_vertex, lambda_edge) maximize dev solve
// accuracy, lambda_udg maximizes dev UDG exact match. Ties go to the smaller
// sum, then lexicographically smaller values. Throws std::invalid_argument
// on an empty dev set or an empty grid axis.
ScalingParams tune_lambdas(std::span<const TuningItem> dev, const LambdaGrid& grid,
                           std::size_t beam = 200);

TuningItem make_tuning_item(const Problem& problem, const ClassifierSuite& suite);

struct TunedSystem {
  ClassifierSuite suite;
  ScalingParams params;
};

// Trains on `train`, tunes on `dev`, then retrains on train + dev.
TunedSystem train_and_tune(const std::vector<Problem>& train, const std::vector<Problem>& dev,
                           FeatureFlags flags, const TrainOptions& options,
                           const LambdaGrid& grid, std::size_t beam = 200);

}  // namespace unitdep
