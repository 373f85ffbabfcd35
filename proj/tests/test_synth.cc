#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "unitdep/annotate.h"
#include "unitdep/synth.h"

using namespace unitdep;

TEST_CASE("generation is deterministic in the seed") {
  auto a = generate_corpus(3, 80), b = generate_corpus(3, 80), c = generate_corpus(4, 80);
  REQUIRE(a.size() == 80);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(problem_to_json(a[i]) == problem_to_json(b[i]));
  }
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].text != c[i].text;
  CHECK(differs);
}

TEST_CASE("size below 50 is rejected") {
  CHECK_THROWS_AS(generate_corpus(1, 49), std::invalid_argument);
  CHECK(generate_corpus(1, 50).size() == 50);
}

TEST_CASE("every problem is fully annotated and its tree evaluates to the answer") {
  auto corpus = generate_corpus(1, 500);
  std::set<std::string> ids, families;
  for (const auto& p : corpus) {
    REQUIRE(p.gold);
    REQUIRE(p.gold->tree);
    CHECK(evaluate(*p.gold->tree, p.values()) == p.gold->answer);
    CHECK(p.gold->answer > 0);
    CHECK(ids.insert(p.id).second);
    families.insert(problem_family(p));
    CHECK_NOTHROW(derive_gold(p));
    // Round trip through the JSONL record format.
    auto back = problem_from_json(problem_to_json(p));
    CHECK(back.gold->tree == p.gold->tree);
    CHECK(back.gold->rates == p.gold->rates);
  }
  CHECK(families == std::set<std::string>{"addsub", "compare", "distractor", "grouped", "rate",
                                          "ratequestion"});
}

TEST_CASE("distractor problems leave a quantity out of the gold tree") {
  auto corpus = generate_corpus(1, 500);
  int seen = 0;
  for (const auto& p : corpus) {
    if (problem_family(p) != "distractor") continue;
    ++seen;
    CHECK(p.gold->tree->quantities().size() < static_cast<std::size_t>(p.num_quantities()));
    CHECK(in_distractor_rate_subset(p));
  }
  CHECK(seen > 20);
}

TEST_CASE("rate questions mark the question vertex") {
  auto corpus = generate_corpus(1, 500);
  for (const auto& p : corpus) {
    if (problem_family(p) != "ratequestion") continue;
    CHECK(p.gold->rates->count(p.question_vertex()) == 1);
  }
}
