#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.h"
#include "unitdep/expr_tree.h"

using namespace unitdep;

namespace {

std::vector<Rational> fig1_values() { return {66, 8, 10}; }

// Random raw tree over the given quantity indices, any op at every node.
ExprTree random_tree(std::vector<int> qs, std::mt19937& rng) {
  if (qs.size() == 1) return ExprTree::leaf(qs[0]);
  std::shuffle(qs.begin(), qs.end(), rng);
  std::size_t cut = 1 + rng() % (qs.size() - 1);
  std::vector<int> l(qs.begin(), qs.begin() + static_cast<long>(cut));
  std::vector<int> r(qs.begin() + static_cast<long>(cut), qs.end());
  Op op = kAllOps[rng() % kAllOps.size()];
  return ExprTree::combine(op, random_tree(l, rng), random_tree(r, rng));
}

}  // namespace

TEST_CASE("evaluate") {
  auto t = parse_indexed_prefix(testing::kFlowersTree);
  auto v = fig1_values();
  CHECK(evaluate(t, v) == 7);
  CHECK(evaluate(ExprTree::leaf(0), v) == 66);
  std::vector<Rational> w = {3, 10};
  CHECK(evaluate(parse_indexed_prefix("(-r #0 #1)"), w) == 7);
  CHECK(evaluate(parse_indexed_prefix("(/r #0 #1)"), w) == Rational(10, 3));
}

TEST_CASE("evaluate reports division by zero") {
  std::vector<Rational> v = {5, 3, 3};
  auto t = parse_indexed_prefix("(/ #0 (- #1 #2))");
  CHECK_THROWS_AS(evaluate(t, v), EvalError);
  try {
    evaluate(t, v);
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("(- #1 #2)") != std::string::npos);
  }
}

TEST_CASE("prefix round trip") {
  for (const char* s : {"(/ (- #0 #2) #1)", "#3", "(-r #0 (*  #1 #2))", "(/r (+ #0 #1) #2)"}) {
    auto t = parse_indexed_prefix(s);
    CHECK(parse_indexed_prefix(t.to_prefix()) == t);
  }
  CHECK(parse_indexed_prefix(testing::kFlowersTree).to_prefix() == testing::kFlowersTree);
  CHECK_THROWS_AS(parse_indexed_prefix("(+ #0 #0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_indexed_prefix("(+ #0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_indexed_prefix("(% #0 #1)"), std::invalid_argument);
}

TEST_CASE("op_lca on the flowers tree") {
  auto t = parse_indexed_prefix(testing::kFlowersTree);
  CHECK(op_lca(t, 0, 2) == Op::Sub);
  CHECK(op_lca(t, 0, 1) == Op::Div);
  CHECK(op_lca(t, 1, 2) == Op::DivR);
  CHECK_THROWS_AS(op_lca(t, 0, 3), std::invalid_argument);
}

TEST_CASE("op_lca agrees with an ancestor walk") {
  // Independent oracle: mark qi's ancestors, walk up from qj.
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = canonicalize(random_tree({0, 1, 2, 3}, rng));
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        std::set<int> up;
        for (int v = t.leaf_of(a); v >= 0; v = t.node(v).parent) up.insert(v);
        int prev = t.leaf_of(b), lca = t.node(prev).parent;
        while (!up.count(lca)) {
          prev = lca;
          lca = t.node(lca).parent;
        }
        Op op = t.node(lca).op;
        bool a_right = prev == t.node(lca).left;
        Op expect = a_right && (op == Op::Sub || op == Op::SubR || op == Op::Div || op == Op::DivR)
                        ? reversed(op)
                        : op;
        CHECK(op_lca(t, a, b) == expect);
      }
    }
  }
}

TEST_CASE("canonicalize merges equivalent decompositions") {
  auto a = canonicalize(parse_indexed_prefix("(- (- #0 #1) #2)"));
  auto b = canonicalize(parse_indexed_prefix("(- #0 (+ #1 #2))"));
  CHECK(a == b);
  auto c = canonicalize(parse_indexed_prefix("(/ (/ #0 #1) #2)"));
  auto d = canonicalize(parse_indexed_prefix("(/ #0 (* #1 #2))"));
  CHECK(c == d);
  CHECK(canonicalize(ExprTree::leaf(4)) == ExprTree::leaf(4));
  CHECK(is_canonical(parse_indexed_prefix(testing::kFlowersTree)));
  CHECK(canonicalize(parse_indexed_prefix("(+ #2 #0)")).to_prefix() == "(+ #0 #2)");
  CHECK(canonicalize(parse_indexed_prefix("(-r #2 #0)")).to_prefix() == "(- #0 #2)");
  CHECK(canonicalize(parse_indexed_prefix("(- #1 #0)")).to_prefix() == "(- #1 #0)");
}

TEST_CASE("canonicalize preserves value and is idempotent") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rational> vals;
    for (int i = 0; i < 5; ++i) {
      int n = 0;
      while (n == 0) n = num(rng);
      vals.emplace_back(n, den(rng));
    }
    std::size_t k = 1 + rng() % 5;
    std::vector<int> qs;
    for (std::size_t i = 0; i < k; ++i) qs.push_back(static_cast<int>(i));
    auto raw = random_tree(qs, rng);
    Rational before;
    try {
      before = evaluate(raw, vals);
    } catch (const EvalError&) {
      continue;  // an intermediate zero divisor; the raw tree has no value
    }
    auto canon = canonicalize(raw);
    CHECK(evaluate(canon, vals) == before);
    CHECK(canonicalize(canon) == canon);
    CHECK(is_canonical(canon));
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("shape signature") {
  CHECK(shape_signature(parse_indexed_prefix(testing::kFlowersTree)) == "(/ (- _ _) _)");
}
