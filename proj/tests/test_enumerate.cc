#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "unitdep/enumerate.h"

using namespace unitdep;

namespace {

// Every raw binary tree over exactly `qs`, with every op at every node.
std::vector<ExprTree> all_raw_trees(const std::vector<int>& qs) {
  if (qs.size() == 1) return {ExprTree::leaf(qs[0])};
  std::vector<ExprTree> out;
  // Split into two non-empty sides; ordered splits plus all six ops cover
  // both operand orders.
  for (unsigned mask = 1; mask + 1 < (1u << qs.size()); ++mask) {
    std::vector<int> l, r;
    for (std::size_t i = 0; i < qs.size(); ++i) ((mask >> i) & 1u ? l : r).push_back(qs[i]);
    for (const auto& a : all_raw_trees(l))
      for (const auto& b : all_raw_trees(r))
        for (Op op : kAllOps) out.push_back(ExprTree::combine(op, a, b));
  }
  return out;
}

// Brute-force oracle: canonicalize every raw tree over every subset, keep
// the distinct ones with a strictly positive, well-defined value.
std::set<std::string> oracle(const std::vector<Rational>& values, std::size_t max_irrelevant) {
  std::set<std::string> out;
  std::size_t n = values.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> qs;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) qs.push_back(static_cast<int>(i));
    if (n - qs.size() > max_irrelevant) continue;
    for (const auto& raw : all_raw_trees(qs)) {
      auto t = canonicalize(raw);
      try {
        if (evaluate(t, values) > 0) out.insert(t.to_prefix());
      } catch (const EvalError&) {
      }
    }
  }
  return out;
}

std::vector<std::string> enumerated(const std::vector<Rational>& values, std::size_t max_irr) {
  std::vector<std::string> out;
  for (const auto& e : enumerate_trees(values, max_irr)) out.push_back(e.tree.to_prefix());
  return out;
}

}  // namespace

TEST_CASE("two quantities, both used") {
  std::vector<Rational> v = {2, 3};
  auto got = enumerated(v, 0);
  std::set<std::string> expect = {"(+ #0 #1)", "(- #1 #0)", "(* #0 #1)", "(/ #0 #1)",
                                  "(/ #1 #0)"};
  CHECK(got.size() == 5);
  CHECK(std::set<std::string>(got.begin(), got.end()) == expect);
}

TEST_CASE("single quantity") {
  std::vector<Rational> v = {5};
  auto got = enumerate_trees(v);
  REQUIRE(got.size() == 1);
  CHECK(got[0].tree == ExprTree::leaf(0));
  CHECK(got[0].value == 5);
}

TEST_CASE("equal values still give distinct trees") {
  std::vector<Rational> v = {1, 1};
  auto got = enumerated(v, 0);
  std::set<std::string> s(got.begin(), got.end());
  CHECK(s.count("(* #0 #1)"));
  CHECK(s.count("(/ #0 #1)"));
  CHECK(s.count("(/ #1 #0)"));
  CHECK(s.count("(+ #0 #1)"));
  CHECK_FALSE(s.count("(- #0 #1)"));  // zero is not positive
}

TEST_CASE("values carried with trees are exact") {
  std::vector<Rational> v = {66, 8, 10};
  for (const auto& e : enumerate_trees(v)) CHECK(evaluate(e.tree, v) == e.value);
}

TEST_CASE("enumeration matches the brute-force oracle") {
  std::vector<std::vector<Rational>> cases = {
      {66, 8, 10}, {2, 3, 5}, {1, 1, 2}, {Rational(1, 2), 4, 7}, {0, 3, 3}, {4, 4, 4},
      {6, 2, 3, 5}, {1, 2, 2, 9}};
  for (const auto& v : cases) {
    for (std::size_t irr = 0; irr <= v.size(); ++irr) {
      auto got = enumerated(v, irr);
      std::set<std::string> uniq(got.begin(), got.end());
      CHECK_MESSAGE(uniq.size() == got.size(), "duplicates");
      CHECK(uniq == oracle(v, irr));
    }
  }
}

TEST_CASE("tree counts with generic values") {
  // With values where no subtree can vanish, every canonical tree appears
  // or its value is negative; count canonical trees ignoring sign through
  // the oracle's raw generation.
  std::vector<Rational> v = {7, 11, 13};
  std::set<std::string> all;
  for (const auto& raw : all_raw_trees({0, 1, 2})) all.insert(canonicalize(raw).to_prefix());
  CHECK(all.size() == 68);
  std::set<std::string> two;
  for (const auto& raw : all_raw_trees({0, 1})) two.insert(canonicalize(raw).to_prefix());
  CHECK(two.size() == 6);
}

TEST_CASE("enumeration order") {
  std::vector<Rational> v = {66, 8, 10};
  auto got = enumerate_trees(v);
  std::size_t prev = 3;
  for (const auto& e : got) {
    CHECK(e.tree.quantities().size() <= prev);
    prev = e.tree.quantities().size();
  }
  CHECK(got.front().tree.quantities().size() == 3);
  CHECK(got.back().tree == ExprTree::leaf(2));
}

TEST_CASE("limits") {
  std::vector<Rational> none;
  CHECK_THROWS_AS(enumerate_trees(none), std::invalid_argument);
  std::vector<Rational> seven(7, Rational(2));
  CHECK_THROWS_AS(enumerate_trees(seven), std::invalid_argument);
}
