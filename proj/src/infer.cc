#include "unitdep/infer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "unitdep/annotate.h"
#include "unitdep/enumerate.h"

namespace unitdep {

namespace {

constexpr std::size_t kUdgBeam = 64;
constexpr int kMaxExhaustiveVertices = 6;

struct TreeCandidate {
  ExprTree tree;
  Rational value;
  double rel = 0;
  double lca = 0;
  std::size_t nodes = 0;
  std::string key;  // prefix form, the last tie-breaker
};

bool tree_before(double sa, const TreeCandidate& a, double sb, const TreeCandidate& b) {
  if (sa != sb) return sa > sb;
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  return a.key < b.key;
}

std::vector<TreeCandidate> candidate_trees(const ScoreTables& tables,
                                           std::span<const Rational> values) {
  if (values.empty()) throw InferenceError("problem has no quantities");
  if (values.size() > kMaxEnumeratedQuantities)
    throw InferenceError("problem has " + std::to_string(values.size()) +
                         " quantities; at most " + std::to_string(kMaxEnumeratedQuantities) +
                         " are supported");
  if (static_cast<std::size_t>(tables.num_quantities()) != values.size())
    throw std::invalid_argument("score tables and values disagree on the quantity count");
  std::vector<TreeCandidate> out;
  for_each_tree(values, values.size(), [&](const ExprTree& tree, const Rational& value) {
    auto b = tree_breakdown(tree, tables);
    out.push_back({tree, value, b.rel, b.lca, tree.size(), tree.to_prefix()});
  });
  if (out.empty()) throw InferenceError("no expression over the quantities has a positive value");
  return out;
}

// Indices of the top `beam` candidates under lambda_rel, best first.
std::vector<std::size_t> select_trees(const std::vector<TreeCandidate>& cands, double lambda_rel,
                                      std::size_t beam) {
  std::vector<double> score(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i)
    score[i] = lambda_rel * cands[i].rel + cands[i].lca;
  std::vector<std::size_t> idx(cands.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto before = [&](std::size_t a, std::size_t b) {
    return tree_before(score[a], cands[a], score[b], cands[b]);
  };
  if (beam != 0 && beam < idx.size()) {
    std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(beam), idx.end(), before);
    idx.resize(beam);
  } else {
    std::sort(idx.begin(), idx.end(), before);
  }
  return idx;
}

std::vector<VertexLabel> labels_of(unsigned mask, int v) {
  std::vector<VertexLabel> out(static_cast<std::size_t>(v));
  for (int k = 0; k < v; ++k)
    out[static_cast<std::size_t>(k)] = (mask >> k) & 1u ? VertexLabel::Rate : VertexLabel::NotRate;
  return out;
}

// Best label for one edge: highest scaled score among admissible labels,
// ties to the smallest label.
template <typename Admit>
EdgeType best_edge(const ScoreTables& tables, int i, int j, double lambda, Admit admit) {
  std::optional<EdgeType> best;
  double best_score = 0;
  for (auto t : kAllEdgeTypes) {
    if (!admit(t)) continue;
    double s = lambda * tables.edge(i, j, t);
    if (!best || s > best_score) {
      best = t;
      best_score = s;
    }
  }
  return *best;  // NoRelation is always admissible
}

// Vertex and edge sums for every vertex labeling that passes conditions 1
// and 2, with each edge at its best admissible label.
struct LabelingScore {
  unsigned mask = 0;
  double vertex = 0;
  double edge = 0;
};

std::vector<LabelingScore> labeling_scores(const ConsistencyChecker& checker,
                                           const ScoreTables& tables) {
  int v = tables.num_quantities() + 1;
  std::vector<LabelingScore> out;
  for (unsigned mask = 0; mask < (1u << v); ++mask) {
    auto labels = labels_of(mask, v);
    if (!checker.vertex_conditions_hold(labels)) continue;
    LabelingScore s{mask, 0, 0};
    for (int k = 0; k < v; ++k)
      if (labels[static_cast<std::size_t>(k)] == VertexLabel::Rate) s.vertex += tables.vertex_rate(k);
    for_each_pair(v, [&](int i, int j) {
      auto t = best_edge(tables, i, j, 1.0, [&](EdgeType e) {
        return edge_allowed(e, labels[static_cast<std::size_t>(i)],
                            labels[static_cast<std::size_t>(j)]) &&
               checker.permits(i, j, e, labels);
      });
      s.edge += tables.edge(i, j, t);
    });
    out.push_back(s);
  }
  return out;
}

// Drops labelings dominated in both sums; the maximum of any non-negative
// combination survives.
std::vector<LabelingScore> pareto(std::vector<LabelingScore> all) {
  std::sort(all.begin(), all.end(), [](const LabelingScore& a, const LabelingScore& b) {
    if (a.vertex != b.vertex) return a.vertex > b.vertex;
    return a.edge > b.edge;
  });
  std::vector<LabelingScore> out;
  for (const auto& s : all)
    if (out.empty() || s.edge > out.back().edge) out.push_back(s);
  return out;
}

UnitDependencyGraph graph_for(const ConsistencyChecker* checker, const ScoreTables& tables,
                              unsigned mask, double lambda_edge) {
  int n = tables.num_quantities();
  UnitDependencyGraph g(n);
  auto labels = labels_of(mask, n + 1);
  for (int k = 0; k <= n; ++k) g.set_vertex(k, labels[static_cast<std::size_t>(k)]);
  for_each_pair(n + 1, [&](int i, int j) {
    g.set_edge(i, j, best_edge(tables, i, j, lambda_edge, [&](EdgeType e) {
                 return edge_allowed(e, labels[static_cast<std::size_t>(i)],
                                     labels[static_cast<std::size_t>(j)]) &&
                        (!checker || checker->permits(i, j, e, labels));
               }));
  });
  return g;
}

void check_grid_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw std::invalid_argument(std::string("empty lambda grid for ") + name);
  for (double x : axis)
    if (!(x >= 0) || !std::isfinite(x))
      throw std::invalid_argument(std::string("lambda grid for ") + name +
                                  " must be finite and non-negative");
}

// Ordering for tuned parameter triples: smaller sum, then lexicographic.
bool simpler(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double sa = a[0] + a[1] + a[2], sb = b[0] + b[1] + b[2];
  if (sa != sb) return sa < sb;
  return a < b;
}

}  // namespace

nlohmann::json params_to_json(const ScalingParams& p) {
  return {{"lambda_udg", p.lambda_udg},
          {"lambda_rel", p.lambda_rel},
          {"lambda_vertex", p.lambda_vertex},
          {"lambda_edge", p.lambda_edge}};
}

ScalingParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("scaling parameters must be an object");
  ScalingParams p;
  auto read = [&](const char* key, double& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number()) throw DataError(std::string("'") + key + "' must be a number");
    out = it->get<double>();
  };
  read("lambda_udg", p.lambda_udg);
  read("lambda_rel", p.lambda_rel);
  read("lambda_vertex", p.lambda_vertex);
  read("lambda_edge", p.lambda_edge);
  return p;
}

ScoreTables::ScoreTables(int num_quantities) : n_(num_quantities) {
  if (num_quantities < 0) throw std::invalid_argument("negative quantity count");
  auto v = static_cast<std::size_t>(n_ + 1);
  auto q = static_cast<std::size_t>(n_);
  vertex_rate_.assign(v, 0.0);
  edge_.assign(v * (v - 1) / 2, {});
  rel_.assign(q, 0.0);
  lca_.assign(q == 0 ? 0 : q * (q - 1) / 2, {});
}

std::size_t ScoreTables::vertex_pair(int i, int j) const {
  int v = n_ + 1;
  if (i < 0 || j >= v || i >= j) throw std::out_of_range("bad vertex pair");
  return static_cast<std::size_t>(i * (2 * v - i - 1) / 2 + (j - i - 1));
}

std::size_t ScoreTables::quantity_pair(int i, int j) const {
  if (i < 0 || j >= n_ || i >= j) throw std::out_of_range("bad quantity pair");
  return static_cast<std::size_t>(i * (2 * n_ - i - 1) / 2 + (j - i - 1));
}

ScoreTables compute_score_tables(const Problem& problem, const ClassifierSuite& suite) {
  int n = problem.num_quantities();
  ScoreTables t(n);
  FeatureContext ctx(problem);
  int rate = suite.vertex.label_index("Rate");
  int irrelevant = suite.irrelevance.label_index("Irrelevant");
  for (int v = 0; v <= n; ++v)
    t.vertex_rate(v) = suite.vertex.score(vertex_features(ctx, v, suite.flags), rate);
  for_each_pair(n + 1, [&](int i, int j) {
    auto s = suite.edge.scores(edge_features(ctx, i, j, suite.flags));
    for (auto e : kAllEdgeTypes) t.edge(i, j, e) = s[static_cast<std::size_t>(e)];
  });
  for (int q = 0; q < n; ++q) t.rel(q) = suite.irrelevance.score(relevance_features(ctx, q), irrelevant);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto s = suite.lca.scores(lca_features(ctx, i, j));
      for (auto op : kAllOps) t.lca(i, j, op) = s[static_cast<std::size_t>(op)];
    }
  }
  return t;
}

ScoreBreakdown tree_breakdown(const ExprTree& tree, const ScoreTables& tables) {
  ScoreBreakdown b;
  for (int q = 0; q < tables.num_quantities(); ++q)
    if (!tree.uses(q)) b.rel += tables.rel(q);
  const auto& used = tree.quantities();
  for (std::size_t a = 0; a < used.size(); ++a)
    for (std::size_t c = a + 1; c < used.size(); ++c)
      b.lca += tables.lca(used[a], used[c], op_lca(tree, used[a], used[c]));
  return b;
}

ScoreBreakdown graph_breakdown(const UnitDependencyGraph& graph, const ScoreTables& tables) {
  if (graph.num_quantities() != tables.num_quantities())
    throw std::invalid_argument("graph and score tables disagree on the quantity count");
  ScoreBreakdown b;
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (graph.vertex(v) == VertexLabel::Rate) b.vertex += tables.vertex_rate(v);
  for_each_pair(graph.num_vertices(),
                [&](int i, int j) { b.edge += tables.edge(i, j, graph.edge(i, j)); });
  return b;
}

ScoreBreakdown tuple_breakdown(const ExprTree& tree, const UnitDependencyGraph& graph,
                               const ScoreTables& tables) {
  auto b = tree_breakdown(tree, tables);
  auto g = graph_breakdown(graph, tables);
  b.vertex = g.vertex;
  b.edge = g.edge;
  return b;
}

double score_udg(const UnitDependencyGraph& graph, const ScoreTables& tables,
                 const ScalingParams& params) {
  auto b = graph_breakdown(graph, tables);
  return b.vertex + params.lambda_udg * b.edge;
}

double score_tree(const ExprTree& tree, const ScoreTables& tables, const ScalingParams& params) {
  auto b = tree_breakdown(tree, tables);
  return params.lambda_rel * b.rel + b.lca;
}

UnitDependencyGraph predict_udg(const ScoreTables& tables, const ScalingParams& params) {
  int n = tables.num_quantities();
  int v = n + 1;
  auto better = [&](double sa, const UnitDependencyGraph& a, double sb,
                    const UnitDependencyGraph& b) { return sa != sb ? sa > sb : a < b; };
  if (v <= kMaxExhaustiveVertices) {
    std::optional<UnitDependencyGraph> best;
    double best_score = 0;
    for (unsigned mask = 0; mask < (1u << v); ++mask) {
      auto g = graph_for(nullptr, tables, mask, params.lambda_udg);
      double s = score_udg(g, tables, params);
      if (!best || better(s, g, best_score, *best)) {
        best = std::move(g);
        best_score = s;
      }
    }
    return *best;
  }
  // Beam over vertex labels in vertex order; edges to earlier vertices are
  // settled as each vertex is labelled.
  struct Partial {
    unsigned mask;
    double score;
  };
  std::vector<Partial> beam{{0, 0.0}};
  for (int k = 0; k < v; ++k) {
    std::vector<Partial> next;
    for (const auto& p : beam) {
      for (unsigned bit : {0u, 1u}) {
        unsigned mask = p.mask | (bit << k);
        double s = p.score + (bit ? tables.vertex_rate(k) : 0.0);
        auto lk = bit ? VertexLabel::Rate : VertexLabel::NotRate;
        for (int i = 0; i < k; ++i) {
          auto li = (mask >> i) & 1u ? VertexLabel::Rate : VertexLabel::NotRate;
          auto t = best_edge(tables, i, k, params.lambda_udg,
                             [&](EdgeType e) { return edge_allowed(e, li, lk); });
          s += params.lambda_udg * tables.edge(i, k, t);
        }
        next.push_back({mask, s});
      }
    }
    std::stable_sort(next.begin(), next.end(), [](const Partial& a, const Partial& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.mask < b.mask;
    });
    if (next.size() > kUdgBeam) next.resize(kUdgBeam);
    beam = std::move(next);
  }
  std::optional<UnitDependencyGraph> best;
  double best_score = 0;
  for (const auto& p : beam) {
    auto g = graph_for(nullptr, tables, p.mask, params.lambda_udg);
    double s = score_udg(g, tables, params);
    if (!best || better(s, g, best_score, *best)) {
      best = std::move(g);
      best_score = s;
    }
  }
  return *best;
}

UnitDependencyGraph predict_udg(const Problem& problem, const ClassifierSuite& suite,
                                const ScalingParams& params) {
  return predict_udg(compute_score_tables(problem, suite), params);
}

UnitDependencyGraph best_consistent_graph(const ExprTree& tree, const ScoreTables& tables,
                                          const ScalingParams& params) {
  ConsistencyChecker checker(tree, tables.num_quantities());
  std::optional<UnitDependencyGraph> best;
  double best_score = 0;
  for (const auto& ls : labeling_scores(checker, tables)) {
    auto g = graph_for(&checker, tables, ls.mask, params.lambda_edge);
    auto b = graph_breakdown(g, tables);
    double s = params.lambda_vertex * b.vertex + params.lambda_edge * b.edge;
    if (!best || s > best_score || (s == best_score && g < *best)) {
      best = std::move(g);
      best_score = s;
    }
  }
  // The all-NotRate labeling always passes conditions 1 and 2.
  return *best;
}

std::vector<ScoredTuple> rank_tuples(const ScoreTables& tables, std::span<const Rational> values,
                                     const ScalingParams& params, std::size_t beam,
                                     std::size_t top) {
  auto cands = candidate_trees(tables, values);
  auto kept = select_trees(cands, params.lambda_rel, beam);
  std::vector<ScoredTuple> tuples;
  std::vector<const TreeCandidate*> source;
  for (auto i : kept) {
    const auto& c = cands[i];
    auto g = best_consistent_graph(c.tree, tables, params);
    auto b = tuple_breakdown(c.tree, g, tables);
    tuples.push_back({c.tree, std::move(g), c.value, b.total(params), b});
    source.push_back(&c);
  }
  std::vector<std::size_t> order(tuples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tree_before(tuples[a].score, *source[a], tuples[b].score, *source[b]);
  });
  std::vector<ScoredTuple> out;
  for (std::size_t k = 0; k < order.size() && (top == 0 || k < top); ++k)
    out.push_back(std::move(tuples[order[k]]));
  return out;
}

ScoredTuple solve_joint(const ScoreTables& tables, std::span<const Rational> values,
                        const ScalingParams& params, std::size_t beam) {
  return rank_tuples(tables, values, params, beam, 1).front();
}

ScoredTuple solve_joint(const Problem& problem, const ClassifierSuite& suite,
                        const ScalingParams& params, std::size_t beam) {
  auto values = problem.values();
  return solve_joint(compute_score_tables(problem, suite), values, params, beam);
}

nlohmann::json ScoredTuple::to_json(const Problem* problem) const {
  return {{"value", format_rational(value)},
          {"tree", problem ? problem->format_tree(tree) : tree.to_prefix()},
          {"udg", udg_to_json(graph)},
          {"score", score},
          {"breakdown",
           {{"rel", breakdown.rel},
            {"lca", breakdown.lca},
            {"vertex", breakdown.vertex},
            {"edge", breakdown.edge}}}};
}

ScalingParams tune_lambdas(std::span<const TuningItem> dev, const LambdaGrid& grid,
                           std::size_t beam) {
  if (dev.empty()) throw std::invalid_argument("empty development set");
  check_grid_axis(grid.rel, "rel");
  check_grid_axis(grid.vertex, "vertex");
  check_grid_axis(grid.edge, "edge");
  check_grid_axis(grid.udg, "udg");

  std::size_t nr = grid.rel.size(), nv = grid.vertex.size(), ne = grid.edge.size();
  std::vector<int> correct(nr * nv * ne, 0);

  for (const auto& item : dev) {
    auto cands = candidate_trees(item.tables, item.values);
    std::map<std::size_t, std::vector<LabelingScore>> frontier;
    std::vector<std::vector<std::size_t>> kept(nr);
    for (std::size_t r = 0; r < nr; ++r) {
      kept[r] = select_trees(cands, grid.rel[r], beam);
      for (auto i : kept[r]) {
        if (frontier.count(i)) continue;
        ConsistencyChecker checker(cands[i].tree, item.tables.num_quantities());
        frontier[i] = pareto(labeling_scores(checker, item.tables));
      }
    }
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t a = 0; a < nv; ++a) {
        for (std::size_t e = 0; e < ne; ++e) {
          ScalingParams p;
          p.lambda_rel = grid.rel[r];
          p.lambda_vertex = grid.vertex[a];
          p.lambda_edge = grid.edge[e];
          const TreeCandidate* best = nullptr;
          double best_score = 0;
          for (auto i : kept[r]) {
            const auto& c = cands[i];
            double g = -INFINITY;
            for (const auto& ls : frontier[i])
              g = std::max(g, p.lambda_vertex * ls.vertex + p.lambda_edge * ls.edge);
            ScoreBreakdown b{c.rel, c.lca, 0, 0};
            double s = b.total(p) + g;
            if (!best || tree_before(s, c, best_score, *best)) {
              best = &c;
              best_score = s;
            }
          }
          if (best->value == item.answer) ++correct[(r * nv + a) * ne + e];
        }
      }
    }
  }

  std::array<double, 3> chosen{};
  int chosen_correct = -1;
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t e = 0; e < ne; ++e) {
        std::array<double, 3> cand{grid.rel[r], grid.vertex[a], grid.edge[e]};
        int c = correct[(r * nv + a) * ne + e];
        if (c > chosen_correct || (c == chosen_correct && simpler(cand, chosen))) {
          chosen = cand;
          chosen_correct = c;
        }
      }

  ScalingParams out;
  out.lambda_rel = chosen[0];
  out.lambda_vertex = chosen[1];
  out.lambda_edge = chosen[2];

  int best_udg = -1;
  for (double l : grid.udg) {
    ScalingParams p;
    p.lambda_udg = l;
    int hits = 0;
    for (const auto& item : dev)
      if (item.gold_graph && predict_udg(item.tables, p) == *item.gold_graph) ++hits;
    if (hits > best_udg || (hits == best_udg && l < out.lambda_udg)) {
      best_udg = hits;
      out.lambda_udg = l;
    }
  }
  return out;
}

TuningItem make_tuning_item(const Problem& problem, const ClassifierSuite& suite) {
  if (!problem.gold) throw DataError("problem '" + problem.id + "' has no gold answer");
  TuningItem item{compute_score_tables(problem, suite), problem.values(), problem.gold->answer,
                  std::nullopt};
  if (problem.gold->tree) item.gold_graph = derive_gold(problem).graph;
  return item;
}

TunedSystem train_and_tune(const std::vector<Problem>& train, const std::vector<Problem>& dev,
                           FeatureFlags flags, const TrainOptions& options,
                           const LambdaGrid& grid, std::size_t beam) {
  if (dev.empty()) throw std::invalid_argument("empty development set");
  auto suite = train_suite(train, flags, options);
  std::vector<TuningItem> items;
  for (const auto& p : dev) items.push_back(make_tuning_item(p, suite));
  auto params = tune_lambdas(items, grid, beam);
  std::vector<Problem> all = train;
  all.insert(all.end(), dev.begin(), dev.end());
  return {train_suite(all, flags, options), params};
}

}  // namespace unitdep
