#include "unitdep/udg.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace unitdep {

namespace {

constexpr std::array<std::string_view, 6> kEdgeNames = {
    "SameUnit", "NoRelation", "Rate->Num", "Rate<-Num", "Rate->Den", "Rate<-Den"};

EdgeType rate_edge(bool num, bool rate_is_first) {
  if (num) return rate_is_first ? EdgeType::RateNumFwd : EdgeType::RateNumBwd;
  return rate_is_first ? EdgeType::RateDenFwd : EdgeType::RateDenBwd;
}

using detail::PathFacts;

// Values of PathFacts::place.
enum Place : std::uint8_t { Lca, FirstSide, SecondSide };

bool enters_as_divisor(const ExprTree::Node& node, int child) {
  return (node.op == Op::Div && child == node.right) ||
         (node.op == Op::DivR && child == node.left);
}

// Nodes strictly above `leaf` up to (and including) `stop`, or up to the root
// when stop is -1, each paired with the child the path arrives from.
std::vector<std::pair<int, int>> climb(const ExprTree& tree, int leaf, int stop) {
  std::vector<std::pair<int, int>> out;
  int child = leaf;
  while (child != stop) {
    int up = tree.node(child).parent;
    if (up < 0) break;
    out.emplace_back(up, child);
    child = up;
  }
  return out;
}

std::vector<int> ancestors(const ExprTree& tree, int id) {
  std::vector<int> out;
  for (int v = id; v >= 0; v = tree.node(v).parent) out.push_back(v);
  return out;
}

void check_vertex(const ExprTree& tree, int v, int question_vertex) {
  if (v < 0 || v > question_vertex) throw std::invalid_argument("vertex out of range");
  if (v != question_vertex && !tree.uses(v))
    throw std::invalid_argument("quantity " + std::to_string(v) + " is not in the tree");
}

// Analyses the path between vertices a < b.
PathFacts analyse(const ExprTree& tree, int a, int b, int question_vertex) {
  if (a == b) throw std::invalid_argument("path needs two distinct vertices");
  if (a > b) std::swap(a, b);
  check_vertex(tree, a, question_vertex);
  check_vertex(tree, b, question_vertex);

  std::vector<std::pair<int, int>> first, second;
  int lca = -1;
  int la = tree.leaf_of(a);
  if (b == question_vertex) {
    first = climb(tree, la, -1);
  } else {
    int lb = tree.leaf_of(b);
    auto up_a = ancestors(tree, la);
    auto up_b = ancestors(tree, lb);
    for (int v : up_a) {
      if (std::find(up_b.begin(), up_b.end(), v) != up_b.end()) {
        lca = v;
        break;
      }
    }
    first = climb(tree, la, lca);
    second = climb(tree, lb, lca);
    // The LCA appears once, attributed to neither side.
    if (!first.empty()) first.pop_back();
    if (!second.empty()) second.pop_back();
  }

  PathFacts f;
  auto visit = [&](int id, Place place) {
    const auto& node = tree.node(id);
    f.ops.insert(node.op);
    if (is_multiplicative(node.op)) {
      ++f.mul_div;
      f.place = place;
      f.mul = node.op == Op::Mul;
    }
  };
  for (auto [id, child] : first) {
    visit(id, FirstSide);
    if (is_multiplicative(tree.node(id).op))
      f.first_divisor = enters_as_divisor(tree.node(id), child);
  }
  for (auto [id, child] : second) {
    visit(id, SecondSide);
    if (is_multiplicative(tree.node(id).op))
      f.second_divisor = enters_as_divisor(tree.node(id), child);
  }
  if (lca >= 0) {
    visit(lca, Lca);
    const auto& node = tree.node(lca);
    if (is_multiplicative(node.op)) {
      int from_a = first.empty() ? la : first.back().first;
      f.first_divisor = enters_as_divisor(node, from_a);
      f.second_divisor = !f.first_divisor && node.op != Op::Mul;
    }
  }
  return f;
}

std::optional<EdgeType> label_from(const PathFacts& f, VertexLabel li, VertexLabel lj) {
  if (li == lj) {
    if (f.mul_div == 0) return EdgeType::SameUnit;
    return std::nullopt;
  }
  if (f.mul_div != 1) return std::nullopt;
  bool rate_first = li == VertexLabel::Rate;
  bool rate_divisor = rate_first ? f.first_divisor : f.second_divisor;
  bool other_divisor = rate_first ? f.second_divisor : f.first_divisor;
  if (f.place == Lca) {
    // r[A/B] * n[B]: Den matches n.  x[A] / r[A/B]: Num matches x.
    if (f.mul) return rate_edge(false, rate_first);
    if (rate_divisor) return rate_edge(true, rate_first);
    return std::nullopt;
  }
  bool on_rate_side = (f.place == FirstSide) == rate_first;
  if (on_rate_side) {
    // The other vertex meets the rate's product [A] or quotient [B].
    if (f.mul) return rate_edge(true, rate_first);
    if (rate_divisor) return rate_edge(false, rate_first);
    return std::nullopt;
  }
  // The rate meets the other vertex's product or quotient.
  if (f.mul) return std::nullopt;
  return rate_edge(!other_divisor, rate_first);
}

}  // namespace

std::string_view edge_name(EdgeType type) { return kEdgeNames[static_cast<std::size_t>(type)]; }

std::optional<EdgeType> parse_edge_type(std::string_view name) {
  for (auto t : kAllEdgeTypes)
    if (edge_name(t) == name) return t;
  // Accept the arrow glyphs too.
  if (name == "Rate→Num") return EdgeType::RateNumFwd;
  if (name == "Rate←Num") return EdgeType::RateNumBwd;
  if (name == "Rate→Den") return EdgeType::RateDenFwd;
  if (name == "Rate←Den") return EdgeType::RateDenBwd;
  return std::nullopt;
}

std::string_view vertex_name(VertexLabel label) {
  return label == VertexLabel::Rate ? "Rate" : "NotRate";
}

bool edge_allowed(EdgeType type, VertexLabel label_i, VertexLabel label_j) {
  switch (type) {
    case EdgeType::RateNumFwd:
    case EdgeType::RateDenFwd:
      return label_i == VertexLabel::Rate;
    case EdgeType::RateNumBwd:
    case EdgeType::RateDenBwd:
      return label_j == VertexLabel::Rate;
    default:
      return true;
  }
}

UnitDependencyGraph::UnitDependencyGraph(int num_quantities)
    : n_(num_quantities),
      vertices_(static_cast<std::size_t>(std::max(num_quantities, 0) + 1), VertexLabel::NotRate),
      edges_(static_cast<std::size_t>((num_quantities + 1) * num_quantities / 2),
             EdgeType::NoRelation) {
  if (num_quantities < 0) throw std::invalid_argument("negative quantity count");
}

std::size_t UnitDependencyGraph::pair_index(int i, int j) const {
  int v = num_vertices();
  if (i < 0 || j >= v || i >= j)
    throw std::out_of_range("bad vertex pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  // Pairs before row i: sum_{r<i} (v - 1 - r).
  return static_cast<std::size_t>(i * (2 * v - i - 1) / 2 + (j - i - 1));
}

bool UnitDependencyGraph::structurally_valid() const {
  bool ok = true;
  for_each_pair(num_vertices(), [&](int i, int j) {
    ok = ok && edge_allowed(edge(i, j), vertex(i), vertex(j));
  });
  return ok;
}

void for_each_pair(int num_vertices, const std::function<void(int, int)>& fn) {
  for (int i = 0; i < num_vertices; ++i)
    for (int j = i + 1; j < num_vertices; ++j) fn(i, j);
}

nlohmann::json udg_to_json(const UnitDependencyGraph& graph) {
  auto vertex_json = [&](int v) -> nlohmann::json {
    if (v == graph.question()) return "question";
    return v;
  };
  nlohmann::json rates = nlohmann::json::array();
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (graph.vertex(v) == VertexLabel::Rate) rates.push_back(vertex_json(v));
  nlohmann::json edges = nlohmann::json::array();
  for_each_pair(graph.num_vertices(), [&](int i, int j) {
    auto e = graph.edge(i, j);
    if (e != EdgeType::NoRelation)
      edges.push_back({vertex_json(i), vertex_json(j), std::string(edge_name(e))});
  });
  return {{"rates", rates}, {"edges", edges}};
}

UnitDependencyGraph udg_from_json(const nlohmann::json& j, int num_quantities) {
  UnitDependencyGraph g(num_quantities);
  auto vertex = [&](const nlohmann::json& v) {
    if (v.is_string() && v.get<std::string>() == "question") return g.question();
    if (!v.is_number_integer()) throw std::invalid_argument("bad vertex " + v.dump());
    int id = v.get<int>();
    if (id < 0 || id >= g.num_quantities())
      throw std::invalid_argument("vertex " + std::to_string(id) + " out of range");
    return id;
  };
  for (const auto& r : j.at("rates")) g.set_vertex(vertex(r), VertexLabel::Rate);
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw std::invalid_argument("bad edge " + e.dump());
      int a = vertex(e[0]);
      int b = vertex(e[1]);
      auto type = parse_edge_type(e[2].get<std::string>());
      if (!type) throw std::invalid_argument("unknown edge label " + e[2].dump());
      if (a >= b) throw std::invalid_argument("edge endpoints must be ascending: " + e.dump());
      g.set_edge(a, b, *type);
    }
  }
  return g;
}

std::set<Op> path(const ExprTree& tree, int vi, int vj, int question_vertex) {
  return analyse(tree, vi, vj, question_vertex).ops;
}

std::optional<EdgeType> edge_label(const ExprTree& tree, int vi, int vj, VertexLabel label_i,
                                   VertexLabel label_j, int question_vertex) {
  if (vi > vj) {
    std::swap(vi, vj);
    std::swap(label_i, label_j);
  }
  return label_from(analyse(tree, vi, vj, question_vertex), label_i, label_j);
}

ConsistencyChecker::ConsistencyChecker(const ExprTree& tree, int num_quantities)
    : tree_(tree), n_(num_quantities) {
  if (tree.quantities().back() >= num_quantities)
    throw std::invalid_argument("tree uses quantity " + std::to_string(tree.quantities().back()) +
                                " but the problem has " + std::to_string(num_quantities));
  used_.assign(static_cast<std::size_t>(n_ + 1), false);
  additive_to_root_.assign(static_cast<std::size_t>(n_), false);
  for (int q : tree.quantities()) {
    used_[static_cast<std::size_t>(q)] = true;
    bool additive = true;
    for (auto [id, child] : climb(tree, tree.leaf_of(q), -1))
      additive = additive && is_additive(tree.node(id).op);
    additive_to_root_[static_cast<std::size_t>(q)] = additive;
  }
  used_[static_cast<std::size_t>(n_)] = true;
  UnitDependencyGraph shape(n_);
  pairs_.resize(shape.num_pairs());
  for_each_pair(n_ + 1, [&](int i, int j) {
    auto& info = pairs_[shape.pair_index(i, j)];
    info.active = in_tree(i) && in_tree(j);
    if (info.active) info.facts = analyse(tree_, i, j, n_);
    if (info.active && j < n_ && info.facts.mul_div == 0) additive_pairs_.emplace_back(i, j);
  });
}

bool ConsistencyChecker::in_tree(int vertex) const {
  return vertex >= 0 && vertex <= n_ && used_[static_cast<std::size_t>(vertex)];
}

const ConsistencyChecker::PairInfo& ConsistencyChecker::pair(int i, int j) const {
  int v = n_ + 1;
  return pairs_[static_cast<std::size_t>(i * (2 * v - i - 1) / 2 + (j - i - 1))];
}

bool ConsistencyChecker::vertex_conditions_hold(std::span<const VertexLabel> labels) const {
  bool question_rate = labels[static_cast<std::size_t>(n_)] == VertexLabel::Rate;
  bool other_rate = false;
  for (int q : tree_.quantities())
    other_rate = other_rate || labels[static_cast<std::size_t>(q)] == VertexLabel::Rate;
  for (int q : tree_.quantities()) {
    if (!additive_to_root_[static_cast<std::size_t>(q)]) continue;
    if (question_rate && !other_rate) return false;
    if (!question_rate && labels[static_cast<std::size_t>(q)] == VertexLabel::Rate) return false;
  }
  for (auto [i, j] : additive_pairs_)
    if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)]) return false;
  return true;
}

std::optional<EdgeType> ConsistencyChecker::forced_edge(int i, int j,
                                                        std::span<const VertexLabel> labels) const {
  if (i > j) std::swap(i, j);
  const auto& info = pair(i, j);
  if (!info.active) return std::nullopt;
  return label_from(info.facts, labels[static_cast<std::size_t>(i)],
                    labels[static_cast<std::size_t>(j)]);
}

bool ConsistencyChecker::permits(int i, int j, EdgeType type,
                                 std::span<const VertexLabel> labels) const {
  if (i > j) std::swap(i, j);
  const auto& info = pair(i, j);
  if (!info.active) return true;
  if (auto forced = label_from(info.facts, labels[static_cast<std::size_t>(i)],
                               labels[static_cast<std::size_t>(j)]))
    return type == *forced;
  return !(type == EdgeType::SameUnit && info.facts.mul_div == 1);
}

ConsistencyReport ConsistencyChecker::check(const UnitDependencyGraph& graph) const {
  if (graph.num_quantities() != n_)
    throw std::invalid_argument("graph has " + std::to_string(graph.num_quantities()) +
                                " quantities, checker expects " + std::to_string(n_));
  ConsistencyReport report;
  auto labels = graph.vertex_labels();
  bool question_rate = graph.vertex(n_) == VertexLabel::Rate;
  bool other_rate = false;
  for (int q : tree_.quantities()) other_rate = other_rate || graph.vertex(q) == VertexLabel::Rate;

  std::vector<int> additive_leaves;
  for (int q : tree_.quantities())
    if (additive_to_root_[static_cast<std::size_t>(q)]) additive_leaves.push_back(q);

  if (question_rate && !other_rate && !additive_leaves.empty()) {
    auto vs = additive_leaves;
    vs.push_back(n_);
    report.violations.push_back(
        {1, vs, "question is the only rate but a leaf-to-root path has only +/- nodes"});
  }
  if (!question_rate) {
    for (int q : additive_leaves) {
      if (graph.vertex(q) == VertexLabel::Rate)
        report.violations.push_back(
            {2, {q, n_}, "rate quantity with a non-rate question has an all +/- path to the root"});
    }
  }
  for (auto [i, j] : additive_pairs_) {
    if (graph.vertex(i) != graph.vertex(j))
      report.violations.push_back(
          {3, {i, j}, "rate and non-rate quantities joined by only +/- nodes"});
  }
  for_each_pair(n_ + 1, [&](int i, int j) {
    auto e = graph.edge(i, j);
    if (permits(i, j, e, labels)) return;
    auto forced = forced_edge(i, j, labels);
    std::string detail = "edge is " + std::string(edge_name(e));
    if (forced)
      detail += ", tree implies " + std::string(edge_name(*forced));
    else
      detail += " across a single * or / node";
    report.violations.push_back({3, {i, j}, detail});
  });
  return report;
}

bool ConsistencyChecker::consistent(const UnitDependencyGraph& graph) const {
  if (!vertex_conditions_hold(graph.vertex_labels())) return false;
  auto labels = graph.vertex_labels();
  bool ok = true;
  for_each_pair(n_ + 1, [&](int i, int j) {
    if (ok && !permits(i, j, graph.edge(i, j), labels)) ok = false;
  });
  return ok;
}

ConsistencyReport check_consistency(const UnitDependencyGraph& graph, const ExprTree& tree) {
  return ConsistencyChecker(tree, graph.num_quantities()).check(graph);
}

bool is_consistent(const UnitDependencyGraph& graph, const ExprTree& tree) {
  return check_consistency(graph, tree).consistent();
}

void for_each_consistent_udg(const ExprTree& tree, int num_quantities,
                             const std::function<void(const UnitDependencyGraph&)>& visit) {
  ConsistencyChecker checker(tree, num_quantities);
  int v = num_quantities + 1;
  UnitDependencyGraph g(num_quantities);
  std::vector<std::pair<int, int>> pairs;
  for_each_pair(v, [&](int i, int j) { pairs.emplace_back(i, j); });

  for (unsigned mask = 0; mask < (1u << v); ++mask) {
    for (int k = 0; k < v; ++k)
      g.set_vertex(k, (mask >> k) & 1u ? VertexLabel::Rate : VertexLabel::NotRate);
    if (!checker.vertex_conditions_hold(g.vertex_labels())) continue;

    std::vector<std::vector<EdgeType>> choices;
    choices.reserve(pairs.size());
    for (auto [i, j] : pairs) {
      std::vector<EdgeType> options;
      for (auto t : kAllEdgeTypes)
        if (edge_allowed(t, g.vertex(i), g.vertex(j)) && checker.permits(i, j, t, g.vertex_labels()))
          options.push_back(t);
      choices.push_back(std::move(options));
    }
    // Odometer over the edge choices.
    std::vector<std::size_t> pick(pairs.size(), 0);
    while (true) {
      for (std::size_t p = 0; p < pairs.size(); ++p)
        g.set_edge(pairs[p].first, pairs[p].second, choices[p][pick[p]]);
      visit(g);
      std::size_t p = 0;
      while (p < pick.size() && ++pick[p] == choices[p].size()) pick[p++] = 0;
      if (p == pick.size()) break;
    }
  }
}

std::vector<UnitDependencyGraph> enumerate_consistent_udgs(const ExprTree& tree,
                                                           int num_quantities) {
  std::vector<UnitDependencyGraph> out;
  for_each_consistent_udg(tree, num_quantities,
                          [&](const UnitDependencyGraph& g) { out.push_back(g); });
  return out;
}

}  // namespace unitdep
