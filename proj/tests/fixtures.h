#pragma once

#include <string>

#include "unitdep/infer.h"
#include "unitdep/problem.h"
#include "unitdep/udg.h"

namespace unitdep::testing {

inline const std::string kFlowersText =
    "Isabel picked 66 flowers for her friend\xE2\x80\x99s wedding. She was making bouquets "
    "with 8 flowers in each one. If 10 of the flowers wilted before the wedding, how many "
    "bouquets could she still make?";

// Quantities 66, 8, 10 are #0, #1, #2.
inline const std::string kFlowersTree = "(/ (- #0 #2) #1)";

inline Problem flowers_problem() {
  auto p = make_problem("flowers", kFlowersText);
  GoldAnnotation gold;
  gold.answer = 7;
  gold.tree = parse_indexed_prefix(kFlowersTree);
  gold.rates = std::set<int>{1};
  p.gold = gold;
  return p;
}

inline std::vector<Rational> flowers_values() { return {66, 8, 10}; }

inline UnitDependencyGraph flowers_gold() {
  UnitDependencyGraph g(3);
  g.set_vertex(1, VertexLabel::Rate);
  g.set_edge(0, 1, EdgeType::RateNumBwd);
  g.set_edge(0, 2, EdgeType::SameUnit);
  g.set_edge(1, 2, EdgeType::RateNumFwd);
  g.set_edge(1, 3, EdgeType::RateDenFwd);
  return g;
}

// Mock scores favoring the gold analysis: gold labels 5, everything else -1
// (vertices -5), gold LCA ops 3, Rel -2.
inline ScoreTables flowers_tables() {
  auto gold = flowers_gold();
  auto tree = parse_indexed_prefix(kFlowersTree);
  ScoreTables t(3);
  for (int v = 0; v <= 3; ++v) t.vertex_rate(v) = gold.vertex(v) == VertexLabel::Rate ? 5 : -5;
  for_each_pair(4, [&](int i, int j) {
    for (auto e : kAllEdgeTypes) t.edge(i, j, e) = gold.edge(i, j) == e ? 5 : -1;
  });
  for (int q = 0; q < 3; ++q) t.rel(q) = -2;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) t.lca(a, b, op_lca(tree, a, b)) = 3;
  return t;
}

inline const std::string kPlumsText =
    "Melanie picked 7 plums and 4 oranges from the orchard . She gave 3 plums to Sam . How "
    "many plums does she have now ?";

inline const std::string kHairText =
    "Isabella\xE2\x80\x99s hair is 18.0 inches long. By the end of the year her hair is 24.0 "
    "inches long. How much hair did she grow?";

}  // namespace unitdep::testing
