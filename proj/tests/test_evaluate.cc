#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unitdep/error.h"
#include "unitdep/evaluate.h"
#include "unitdep/synth.h"

using namespace unitdep;

namespace {

EvalConfig small_config() {
  EvalConfig c;
  c.folds = 3;
  c.beam = 50;
  c.train.epochs = 5;
  c.grid.rel = {0, 1};
  c.grid.vertex = {0, 1};
  c.grid.edge = {0, 1};
  c.grid.udg = {1};
  return c;
}

}  // namespace

TEST_CASE("small evaluation: accounting and determinism") {
  auto corpus = generate_corpus(3, 60);
  auto config = small_config();
  auto a = run_evaluation(corpus, config);
  auto b = run_evaluation(corpus, config);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.to_table() == b.to_table());

  CHECK(a.num_problems == 60);
  CHECK(a.fold_params.size() == 3);
  for (const char* name : {"full", "base", "no-vertex", "no-edge", "no-rule", "no-context"}) {
    const auto& s = a.system(name);
    CHECK(s.total == 60);
    CHECK(s.fold_accuracy.size() == 3);
    CHECK(s.correct + s.failures.size() == s.total);
    double mean = 0;
    for (double f : s.fold_accuracy) mean += f / 3;
    CHECK(s.accuracy() == doctest::Approx(mean));
  }
  for (const char* name : {"all", "no-rule", "no-context"}) {
    const auto& c = a.classifier(name);
    CHECK(c.udg_total == 60);
    CHECK(c.vertex_total > c.udg_total);
  }
  CHECK_THROWS_AS(a.system("nope"), std::out_of_range);
  auto j = a.to_json();
  CHECK(j.contains("systems"));
  CHECK(j.contains("classifiers"));
}

TEST_CASE("feature ablations can be skipped") {
  auto corpus = generate_corpus(3, 60);
  auto config = small_config();
  config.feature_ablations = false;
  auto r = run_evaluation(corpus, config);
  CHECK(r.systems.size() == 4);
  CHECK(r.classifiers.size() == 1);
  CHECK_THROWS_AS(r.system("no-rule"), std::out_of_range);
}

TEST_CASE("evaluation preconditions") {
  auto corpus = generate_corpus(3, 60);
  std::vector<Problem> one{corpus[0]};
  CHECK_THROWS_AS(run_evaluation(one, EvalConfig{}), std::invalid_argument);
  auto missing = corpus;
  missing[5].gold.reset();
  CHECK_THROWS_AS(run_evaluation(missing, small_config()), DataError);
}
