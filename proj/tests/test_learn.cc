#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "fixtures.h"
#include "unitdep/learn.h"
#include "unitdep/synth.h"
#include "unitdep/annotate.h"

using namespace unitdep;

namespace {

FeatureVector fv(std::initializer_list<std::pair<const char*, double>> xs) {
  FeatureVector out;
  for (auto [k, v] : xs) out.add(k, v);
  return out;
}

}  // namespace

TEST_CASE("vertex features for 8 in Fig. 1") {
  auto p = testing::flowers_problem();
  auto f = vertex_features(p, 1);
  CHECK(f.contains("bi:8 flowers"));
  CHECK(f.contains("bi:in each"));
  CHECK(f.contains("rule_rate=1"));
  CHECK(f.contains("w1=flowers"));
  CHECK(f.contains("pp:Q_NOUN"));
  // 66 is not a rate.
  CHECK(vertex_features(p, 0).contains("rule_rate=0"));
}

TEST_CASE("degenerate window keeps only boundary and rule features") {
  auto p = make_problem("bare", "5");
  auto f = vertex_features(p, 0);
  for (const auto& [name, value] : f.entries()) {
    bool boundary = name.find("<s>") != std::string::npos || name.find("</s>") != std::string::npos;
    bool rule = name.rfind("rule_", 0) == 0;
    CHECK_MESSAGE((boundary || rule), name);
  }
  CHECK(f.contains("rule_rate=0"));
  CHECK(f.contains("bi:<s> <q>"));
  CHECK(f.contains("bi:<q> </s>"));
}

TEST_CASE("feature extraction is deterministic") {
  auto p = testing::flowers_problem();
  for (int v = 0; v <= 3; ++v) CHECK(vertex_features(p, v) == vertex_features(p, v));
  CHECK(edge_features(p, 1, 3) == edge_features(p, 1, 3));
}

TEST_CASE("feature families can be switched off") {
  auto p = testing::flowers_problem();
  FeatureFlags no_rule{false, true}, no_context{true, false};
  auto without_rules = vertex_features(p, 1, no_rule);
  CHECK(without_rules.contains("bi:8 flowers"));
  for (const auto& [name, value] : without_rules.entries()) CHECK(name.rfind("rule_", 0) != 0);
  auto only_rule = vertex_features(p, 1, no_context);
  CHECK(only_rule.contains("rule_rate=1"));
  CHECK_FALSE(only_rule.contains("bi:8 flowers"));
}

TEST_CASE("edge features for Fig. 1") {
  auto p = testing::flowers_problem();
  auto e02 = edge_features(p, 0, 2);
  CHECK(e02.contains("shared_unit=1"));  // both "flowers"
  auto e13 = edge_features(p, 1, 3);
  CHECK(e13.contains("i:rule_rate=1"));
  CHECK(e13.contains("pair=question"));
  CHECK(e13.contains("i:bi:8 flowers"));
  CHECK(e13.contains("q:qu:bouquets"));
  CHECK_THROWS_AS(edge_features(p, 2, 1), std::invalid_argument);
}

TEST_CASE("edge feature names are disjoint from unprefixed vertex features") {
  auto p = testing::flowers_problem();
  FeatureContext ctx(p);
  for (int i = 0; i <= 3; ++i) {
    for (int j = i + 1; j <= 3; ++j) {
      auto e = edge_features(ctx, i, j);
      for (int v = 0; v <= 3; ++v) {
        auto vf = vertex_features(ctx, v);
        for (const auto& [name, value] : vf.entries()) CHECK_FALSE(e.contains(name));
      }
    }
  }
}

TEST_CASE("score is a dot product") {
  LinearModel m({"L1", "L2"});
  CHECK(m.score(FeatureVector{}, "L1") == 0.0);
  CHECK(m.score(FeatureVector{}, "L2") == 0.0);
  m.set_weight("L1", "a", 2);
  CHECK(m.score(fv({{"a", 1}}), "L1") == 2.0);
  CHECK(m.score(fv({{"a", 3}, {"zzz", 5}}), "L1") == 6.0);
  CHECK(m.score(fv({{"a", 1}}), "L2") == 0.0);
  CHECK_THROWS_AS(m.score(fv({{"a", 1}}), "L3"), std::invalid_argument);
}

TEST_CASE("score is linear in the feature vector") {
  LinearModel m({"x", "y", "z"});
  m.set_weight("x", "a", 1.5);
  m.set_weight("x", "b", -2);
  m.set_weight("y", "b", 0.25);
  m.set_weight("z", "c", 4);
  auto f1 = fv({{"a", 1}, {"b", 2}});
  auto f2 = fv({{"b", 1}, {"c", 3}});
  auto sum = f1;
  sum += f2;
  for (const auto& l : m.labels())
    CHECK(m.score(sum, l) == doctest::Approx(m.score(f1, l) + m.score(f2, l)));
}

TEST_CASE("argmax is invariant to positive weight scaling") {
  LinearModel m({"x", "y", "z"});
  m.set_weight("x", "a", 1);
  m.set_weight("y", "a", 3);
  m.set_weight("y", "b", -1);
  m.set_weight("z", "b", 2);
  LinearModel scaled = m;
  for (const auto& l : m.labels())
    for (const char* f : {"a", "b"}) scaled.set_weight(l, f, 7.5 * m.weight(l, f));
  for (auto f : {fv({{"a", 1}}), fv({{"b", 1}}), fv({{"a", 1}, {"b", 1}}), fv({{"a", 2}, {"b", 5}})})
    CHECK(m.predict(f) == scaled.predict(f));
}

TEST_CASE("separable toy set is learned") {
  LinearModel m({"L1", "L2"});
  std::vector<Example> ex = {{fv({{"a", 1}}), 0}, {fv({{"b", 1}}), 1},
                             {fv({{"a", 1}, {"c", 1}}), 0}, {fv({{"b", 1}, {"c", 1}}), 1}};
  m.train(ex, {10, 1});
  for (const auto& e : ex) CHECK(m.predict(e.features) == e.label);
}

TEST_CASE("a single example is classified correctly") {
  LinearModel m({"p", "q", "r"});
  std::vector<Example> ex = {{fv({{"only", 1}}), 2}};
  m.train(ex, {});
  CHECK(m.predict(ex[0].features) == 2);
}

TEST_CASE("training is deterministic in the seed") {
  std::vector<Example> ex;
  for (int i = 0; i < 40; ++i) {
    std::string a = "f" + std::to_string(i % 7), b = "g" + std::to_string(i % 5);
    ex.push_back({fv({{a.c_str(), 1}, {b.c_str(), 1}}), i % 3});
  }
  LinearModel a({"x", "y", "z"}), b({"x", "y", "z"});
  a.train(ex, {10, 42});
  b.train(ex, {10, 42});
  CHECK(a == b);
}

TEST_CASE("training rejects bad input") {
  LinearModel m({"x", "y"});
  CHECK_THROWS_AS(m.train({}, {}), std::invalid_argument);
  std::vector<Example> bad = {{fv({{"a", 1}}), 2}};
  CHECK_THROWS_AS(m.train(bad, {}), std::invalid_argument);
  CHECK_THROWS_AS(m.label_index("nope"), std::invalid_argument);
}

TEST_CASE("suite label sets") {
  ClassifierSuite s;
  CHECK(s.vertex.labels() == std::vector<std::string>{"NotRate", "Rate"});
  CHECK(s.edge.labels() == std::vector<std::string>{"SameUnit", "NoRelation", "Rate->Num",
                                                    "Rate<-Num", "Rate->Den", "Rate<-Den"});
  CHECK(s.irrelevance.labels() == std::vector<std::string>{"Relevant", "Irrelevant"});
  CHECK(s.lca.num_labels() == 6);
}

TEST_CASE("model and suite serialization round trip") {
  auto corpus = generate_corpus(3, 60);
  auto suite = train_suite(corpus, {}, {3, 9});
  auto back = ClassifierSuite::from_json(suite.to_json());
  CHECK(back.vertex == suite.vertex);
  CHECK(back.edge == suite.edge);
  CHECK(back.irrelevance == suite.irrelevance);
  CHECK(back.lca == suite.lca);
  CHECK(back.flags.rule == suite.flags.rule);

  std::string path = "test_learn_suite.json";
  suite.save(path);
  auto loaded = ClassifierSuite::load(path);
  CHECK(loaded.edge == suite.edge);
  std::remove(path.c_str());
  CHECK_THROWS_AS(ClassifierSuite::load("does/not/exist.json"), DataError);
}

TEST_CASE("vertex classifier generalizes on held-out synthetic problems") {
  auto corpus = generate_corpus(5, 300);
  std::vector<Problem> train(corpus.begin(), corpus.begin() + 200);
  std::vector<Problem> test(corpus.begin() + 200, corpus.end());
  auto suite = train_suite(train);
  std::size_t right = 0, total = 0;
  for (const auto& p : test) {
    auto gold = derive_gold(p).graph;
    FeatureContext ctx(p);
    for (int v = 0; v <= p.num_quantities(); ++v, ++total)
      right += suite.vertex.predict(vertex_features(ctx, v)) == static_cast<int>(gold.vertex(v));
  }
  CHECK(static_cast<double>(right) / static_cast<double>(total) > 0.9);
}
