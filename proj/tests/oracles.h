#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance run. They deliberately avoid the library's own shortcuts.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "unitdep/expr_tree.h"
#include "unitdep/infer.h"
#include "unitdep/udg.h"

namespace unitdep::oracle {

// Every raw binary tree over exactly `qs`, with every op at every node.
inline std::vector<ExprTree> all_raw_trees(const std::vector<int>& qs) {
  if (qs.size() == 1) return {ExprTree::leaf(qs[0])};
  std::vector<ExprTree> out;
  for (unsigned mask = 1; mask + 1 < (1u << qs.size()); ++mask) {
    std::vector<int> l, r;
    for (std::size_t i = 0; i < qs.size(); ++i) ((mask >> i) & 1u ? l : r).push_back(qs[i]);
    for (const auto& a : all_raw_trees(l))
      for (const auto& b : all_raw_trees(r))
        for (Op op : kAllOps) out.push_back(ExprTree::combine(op, a, b));
  }
  return out;
}

// All distinct canonical trees over every non-empty subset of 0..n-1.
inline std::vector<ExprTree> all_canonical_trees(int n) {
  std::set<ExprTree> seen;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> qs;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) qs.push_back(i);
    for (const auto& raw : all_raw_trees(qs)) seen.insert(canonicalize(raw));
  }
  return {seen.begin(), seen.end()};
}

// Symbolic unit typing. A NotRate vertex has one atomic unit; a Rate vertex
// has a Num atom and a distinct Den atom. Every equality pattern among the
// atoms is tried; a pattern is valid when pushing exponent vectors through
// the tree gives equal units at every +/- node, an atomic or simple-rate unit
// at every node, and the question's unit at the root.
class UnitTypingOracle {
 public:
  using Unit = std::map<int, int>;  // atom -> exponent, zeros removed

  UnitTypingOracle(const ExprTree& tree, int n, std::vector<VertexLabel> labels)
      : tree_(tree), n_(n), labels_(std::move(labels)) {
    for (int q : tree.quantities()) vertices_.push_back(q);
    vertices_.push_back(n);
    for (int v : vertices_) {
      slot_of_[v] = slots_++;
      if (labels_[static_cast<std::size_t>(v)] == VertexLabel::Rate) ++slots_;
    }
    std::vector<int> assign(static_cast<std::size_t>(slots_), 0);
    partitions(assign, 0, -1);
  }

  bool any_valid() const { return !typings_.empty(); }
  std::size_t valid_count() const { return typings_.size(); }

  // Whether the relation named by `type` holds for (i, j), i < j, in every
  // valid typing. NoRelation is never forced.
  bool forced(int i, int j, EdgeType type) const {
    if (type == EdgeType::NoRelation) return false;
    for (const auto& t : typings_)
      if (!holds(t, i, j, type)) return false;
    return true;
  }

  // Whether some valid typing realizes the relation.
  bool possible(int i, int j, EdgeType type) const {
    for (const auto& t : typings_)
      if (holds(t, i, j, type)) return true;
    return false;
  }

  // Labels that hold in every valid typing.
  std::set<EdgeType> forced_labels(int i, int j) const {
    std::set<EdgeType> out;
    for (auto t : kAllEdgeTypes)
      if (edge_allowed(t, labels_[static_cast<std::size_t>(i)],
                       labels_[static_cast<std::size_t>(j)]) &&
          forced(i, j, t))
        out.insert(t);
    return out;
  }

 private:
  bool is_rate(int v) const { return labels_[static_cast<std::size_t>(v)] == VertexLabel::Rate; }

  static Unit atom(int a) { return {{a, 1}}; }

  Unit unit_of(const std::vector<int>& assign, int v) const {
    int s = slot_of_.at(v);
    if (!is_rate(v)) return atom(assign[static_cast<std::size_t>(s)]);
    return {{assign[static_cast<std::size_t>(s)], 1}, {assign[static_cast<std::size_t>(s + 1)], -1}};
  }

  static Unit combine(const Unit& a, const Unit& b, int sign) {
    Unit out = a;
    for (auto [k, e] : b) {
      out[k] += sign * e;
      if (out[k] == 0) out.erase(k);
    }
    return out;
  }

  static bool simple(const Unit& u) {
    int pos = 0, neg = 0;
    for (auto [k, e] : u) {
      if (e == 1) ++pos;
      else if (e == -1) ++neg;
      else return false;
    }
    return pos == 1 && neg <= 1;
  }

  std::optional<Unit> push(const std::vector<int>& assign, int id) const {
    const auto& node = tree_.node(id);
    if (node.leaf) return unit_of(assign, node.quantity);
    auto l = push(assign, node.left);
    if (!l) return std::nullopt;
    auto r = push(assign, node.right);
    if (!r) return std::nullopt;
    Unit u;
    switch (node.op) {
      case Op::Add:
      case Op::Sub:
      case Op::SubR:
        if (*l != *r) return std::nullopt;
        u = *l;
        break;
      case Op::Mul: u = combine(*l, *r, 1); break;
      case Op::Div: u = combine(*l, *r, -1); break;
      case Op::DivR: u = combine(*r, *l, -1); break;
    }
    if (!simple(u)) return std::nullopt;
    return u;
  }

  void partitions(std::vector<int>& assign, int pos, int max_block) {
    if (pos == slots_) {
      for (int v : vertices_) {
        if (!is_rate(v)) continue;
        int s = slot_of_.at(v);
        if (assign[static_cast<std::size_t>(s)] == assign[static_cast<std::size_t>(s + 1)]) return;
      }
      auto root = push(assign, tree_.root());
      if (root && *root == unit_of(assign, n_)) typings_.push_back(assign);
      return;
    }
    for (int b = 0; b <= max_block + 1; ++b) {
      assign[static_cast<std::size_t>(pos)] = b;
      partitions(assign, pos + 1, std::max(max_block, b));
    }
  }

  bool holds(const std::vector<int>& assign, int i, int j, EdgeType type) const {
    auto num = [&](int v) { return assign[static_cast<std::size_t>(slot_of_.at(v))]; };
    auto den = [&](int v) { return assign[static_cast<std::size_t>(slot_of_.at(v) + 1)]; };
    switch (type) {
      case EdgeType::SameUnit: return unit_of(assign, i) == unit_of(assign, j);
      case EdgeType::RateNumFwd: return is_rate(i) && !is_rate(j) && num(i) == num(j);
      case EdgeType::RateDenFwd: return is_rate(i) && !is_rate(j) && den(i) == num(j);
      case EdgeType::RateNumBwd: return is_rate(j) && !is_rate(i) && num(j) == num(i);
      case EdgeType::RateDenBwd: return is_rate(j) && !is_rate(i) && den(j) == num(i);
      case EdgeType::NoRelation: return false;
    }
    return false;
  }

  ExprTree tree_;
  int n_;
  std::vector<VertexLabel> labels_;
  std::vector<int> vertices_;
  std::map<int, int> slot_of_;
  int slots_ = 0;
  std::vector<std::vector<int>> typings_;
};

// Score(G, T) summed term by term straight from the tables.
inline double tuple_score(const ExprTree& tree, const UnitDependencyGraph& g,
                          const ScoreTables& t, const ScalingParams& p) {
  int n = t.num_quantities();
  double rel = 0, lca = 0, vertex = 0, edge = 0;
  for (int q = 0; q < n; ++q)
    if (!tree.uses(q)) rel += t.rel(q);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (tree.uses(a) && tree.uses(b)) lca += t.lca(a, b, op_lca(tree, a, b));
  for (int v = 0; v <= n; ++v)
    if (g.vertex(v) == VertexLabel::Rate) vertex += t.vertex_rate(v);
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) edge += t.edge(a, b, g.edge(a, b));
  return p.lambda_rel * rel + lca + p.lambda_vertex * vertex + p.lambda_edge * edge;
}

struct JointArgmax {
  ExprTree tree;
  UnitDependencyGraph graph;
  double score;
  // Best score of any other tree, for spotting near ties.
  double runner_up;
};

// Exhaustive argmax over every positive-valued canonical tree and every
// graph the consistency enumerator yields for it. Ties: fewer nodes, then
// prefix form.
inline std::optional<JointArgmax> exhaustive_joint(const ScoreTables& t,
                                                   const std::vector<Rational>& values,
                                                   const ScalingParams& p) {
  std::optional<JointArgmax> best;
  double runner_up = -1e300;
  for (const auto& tree : all_canonical_trees(static_cast<int>(values.size()))) {
    Rational value;
    try {
      value = evaluate(tree, values);
    } catch (const EvalError&) {
      continue;
    }
    if (value <= 0) continue;
    std::optional<UnitDependencyGraph> graph;
    double score = 0;
    for_each_consistent_udg(tree, t.num_quantities(), [&](const UnitDependencyGraph& g) {
      double s = tuple_score(tree, g, t, p);
      if (!graph || s > score) {
        graph = g;
        score = s;
      }
    });
    bool wins = !best || score > best->score ||
                (score == best->score && (tree.size() < best->tree.size() ||
                                          (tree.size() == best->tree.size() &&
                                           tree.to_prefix() < best->tree.to_prefix())));
    if (wins) {
      if (best) runner_up = std::max(runner_up, best->score);
      best = JointArgmax{tree, *graph, score, 0};
    } else {
      runner_up = std::max(runner_up, score);
    }
  }
  if (best) best->runner_up = runner_up;
  return best;
}

}  // namespace unitdep::oracle
