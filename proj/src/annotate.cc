#include "unitdep/annotate.h"

#include <algorithm>

namespace unitdep {

std::vector<VertexLabel> derive_vertex_labels(const ExprTree& tree, int num_quantities,
                                              const std::optional<std::set<int>>& rates) {
  std::vector<VertexLabel> labels(static_cast<std::size_t>(num_quantities + 1),
                                  VertexLabel::NotRate);
  auto nodes = tree.nodes();
  bool muldiv = std::any_of(nodes.begin(), nodes.end(), [](const ExprTree::Node& node) {
    return !node.leaf && is_multiplicative(node.op);
  });
  if (!muldiv) return labels;
  if (!rates) throw MissingAnnotation("tree has a product or quotient but no rate annotation");
  for (int v : *rates) {
    if (v < 0 || v > num_quantities)
      throw DataError("rate annotation names vertex " + std::to_string(v));
    labels[static_cast<std::size_t>(v)] = VertexLabel::Rate;
  }
  return labels;
}

DerivedUdgGold derive_edge_labels(const ExprTree& tree, std::span<const VertexLabel> labels) {
  int n = static_cast<int>(labels.size()) - 1;
  DerivedUdgGold out{UnitDependencyGraph(n), {}};
  for (int v = 0; v <= n; ++v) out.graph.set_vertex(v, labels[static_cast<std::size_t>(v)]);
  ConsistencyChecker checker(tree, n);
  for_each_pair(n + 1, [&](int i, int j) {
    std::optional<EdgeType> label;
    if (checker.in_tree(i) && checker.in_tree(j)) label = checker.forced_edge(i, j, labels);
    if (label) {
      out.graph.set_edge(i, j, *label);
    } else {
      out.graph.set_edge(i, j, EdgeType::NoRelation);
      out.noisy.emplace(i, j);
    }
  });
  return out;
}

DerivedUdgGold derive_gold(const Problem& problem) {
  if (!problem.gold || !problem.gold->tree)
    throw DataError("problem '" + problem.id + "' has no gold tree");
  const auto& tree = *problem.gold->tree;
  try {
    auto labels = derive_vertex_labels(tree, problem.num_quantities(), problem.gold->rates);
    return derive_edge_labels(tree, labels);
  } catch (const MissingAnnotation& e) {
    throw MissingAnnotation("problem '" + problem.id + "': " + e.what());
  }
}

double noise_rate(std::span<const DerivedUdgGold> derived) {
  std::size_t noisy = 0, total = 0;
  for (const auto& d : derived) {
    noisy += d.noisy.size();
    total += d.num_edges();
  }
  return total == 0 ? 0.0 : static_cast<double>(noisy) / static_cast<double>(total);
}

nlohmann::json derived_to_json(const DerivedUdgGold& derived) {
  auto j = udg_to_json(derived.graph);
  int q = derived.graph.question();
  auto vertex = [&](int v) -> nlohmann::json {
    if (v == q) return "question";
    return v;
  };
  nlohmann::json noisy = nlohmann::json::array();
  for (auto [a, b] : derived.noisy) noisy.push_back({vertex(a), vertex(b)});
  j["noisy"] = noisy;
  return j;
}

}  // namespace unitdep
