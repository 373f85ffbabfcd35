#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.h"
#include "unitdep/annotate.h"
#include "unitdep/synth.h"

using namespace unitdep;

namespace {

constexpr auto R = VertexLabel::Rate;
constexpr auto N = VertexLabel::NotRate;

}  // namespace

TEST_CASE("vertex labels: no x/÷ node means all NotRate, annotation ignored") {
  auto minus = parse_indexed_prefix("(- #0 #2)");
  auto labels = derive_vertex_labels(minus, 3, std::nullopt);
  CHECK(labels == std::vector<VertexLabel>{N, N, N, N});
  // Supplied rates lose to the no-x/÷ rule.
  auto plus = parse_indexed_prefix("(+ #0 #1)");
  CHECK(derive_vertex_labels(plus, 2, std::set<int>{0, 2}) == std::vector<VertexLabel>{N, N, N});
}

TEST_CASE("vertex labels: Fig. 1 with rates {8}") {
  auto tree = parse_indexed_prefix(testing::kFlowersTree);
  auto labels = derive_vertex_labels(tree, 3, std::set<int>{1});
  CHECK(labels == std::vector<VertexLabel>{N, R, N, N});
  CHECK(derive_vertex_labels(tree, 3, std::set<int>{1, 3})[3] == R);
}

TEST_CASE("vertex labels: x/÷ tree without annotation throws") {
  auto tree = parse_indexed_prefix("(* #0 #1)");
  CHECK_THROWS_AS(derive_vertex_labels(tree, 2, std::nullopt), MissingAnnotation);
  auto p = make_problem("p", "Each box has 4 pens. Sam has 3 boxes. How many pens?");
  GoldAnnotation gold;
  gold.answer = 12;
  gold.tree = tree;
  p.gold = gold;
  CHECK_THROWS_AS(derive_gold(p), MissingAnnotation);
  // MissingAnnotation is a data error.
  CHECK_THROWS_AS(derive_gold(p), DataError);
}

TEST_CASE("edge labels for Fig. 1") {
  auto d = derive_gold(testing::flowers_problem());
  const auto& g = d.graph;
  CHECK(g.vertex(1) == R);
  CHECK(g.edge(0, 1) == EdgeType::RateNumBwd);
  CHECK(g.edge(0, 2) == EdgeType::SameUnit);
  CHECK(g.edge(1, 2) == EdgeType::RateNumFwd);
  CHECK(g.edge(1, 3) == EdgeType::RateDenFwd);
  // 66 and 10 reach the question through ÷ with the same label: undetermined.
  CHECK(g.edge(0, 3) == EdgeType::NoRelation);
  CHECK(g.edge(2, 3) == EdgeType::NoRelation);
  CHECK(d.noisy == std::set<std::pair<int, int>>{{0, 3}, {2, 3}});
  CHECK(is_consistent(g, *testing::flowers_problem().gold->tree));
}

TEST_CASE("edge labels for an all-NotRate sum") {
  auto tree = parse_indexed_prefix("(+ #0 #1)");
  std::vector<VertexLabel> labels{N, N, N};
  auto d = derive_edge_labels(tree, labels);
  CHECK(d.graph.edge(0, 1) == EdgeType::SameUnit);
  CHECK(d.graph.edge(0, 2) == EdgeType::SameUnit);
  CHECK(d.graph.edge(1, 2) == EdgeType::SameUnit);
  CHECK(d.noisy.empty());
}

TEST_CASE("Melanie: the unused quantity's pairs are NoRelation and noisy") {
  auto p = make_problem("melanie", testing::kPlumsText);
  GoldAnnotation gold;
  gold.answer = 4;
  gold.tree = p.parse_tree("(- 7 3)");
  p.gold = gold;
  auto d = derive_gold(p);
  for (int v = 0; v < 4; ++v) CHECK(d.graph.vertex(v) == N);
  CHECK(d.graph.edge(0, 2) == EdgeType::SameUnit);
  CHECK(d.graph.edge(0, 3) == EdgeType::SameUnit);
  CHECK(d.graph.edge(2, 3) == EdgeType::SameUnit);
  CHECK(d.noisy == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {1, 3}});
  for (auto [i, j] : d.noisy) CHECK(d.graph.edge(i, j) == EdgeType::NoRelation);
  CHECK(is_consistent(d.graph, *p.gold->tree));
}

TEST_CASE("noise rate counts noisy edges over all edges") {
  std::vector<DerivedUdgGold> none;
  CHECK(noise_rate(none) == 0.0);

  auto sum = derive_edge_labels(parse_indexed_prefix("(+ #0 #1)"), std::vector<VertexLabel>{N, N, N});
  std::vector<DerivedUdgGold> clean{sum};
  CHECK(noise_rate(clean) == 0.0);

  // Fig. 1 tree without the question rate: 2 of 6 edges noisy.
  std::vector<DerivedUdgGold> fig{derive_gold(testing::flowers_problem())};
  CHECK(noise_rate(fig) == doctest::Approx(2.0 / 6.0));

  // Counting only: one pair marked noisy out of six.
  auto tree = parse_indexed_prefix("(- (+ #0 #1) #2)");
  auto three = derive_edge_labels(tree, std::vector<VertexLabel>{N, N, N, N});
  three.noisy.insert({0, 1});
  std::vector<DerivedUdgGold> one{three};
  CHECK(noise_rate(one) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("derived JSON carries the noisy list") {
  auto j = derived_to_json(derive_gold(testing::flowers_problem()));
  CHECK(j.at("noisy") == nlohmann::json::parse("[[0, \"question\"], [2, \"question\"]]"));
  CHECK(j.at("rates") == nlohmann::json::parse("[1]"));
}

TEST_CASE("derivation is a pure function of the gold annotation") {
  auto p = testing::flowers_problem();
  auto a = derive_gold(p);
  auto b = derive_gold(p);
  CHECK(a.graph == b.graph);
  CHECK(a.noisy == b.noisy);
}

TEST_CASE("synthetic gold graphs are consistent and noise stays under 15%") {
  auto corpus = generate_corpus(1, 500);
  std::vector<DerivedUdgGold> derived;
  for (const auto& p : corpus) {
    derived.push_back(derive_gold(p));
    CHECK(is_consistent(derived.back().graph, *p.gold->tree));
  }
  CHECK(noise_rate(derived) < 0.15);
}
