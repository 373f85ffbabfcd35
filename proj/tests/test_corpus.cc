#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "unitdep/corpus.h"
#include "unitdep/error.h"
#include "unitdep/synth.h"

using namespace unitdep;

namespace {

Problem P(const std::string& id, const std::string& text) { return make_problem(id, text); }

std::vector<Problem> numbered(int n) {
  std::vector<Problem> out;
  for (int i = 0; i < n; ++i) out.push_back(P("p" + std::to_string(i), "problem " + std::to_string(i)));
  return out;
}

}  // namespace

TEST_CASE("n-gram overlap") {
  CHECK(ngram_overlap(P("a", "a b c"), P("b", "a b d")) == doctest::Approx(0.6));
  CHECK(ngram_overlap(P("a", "the cat sat"), P("b", "the cat sat")) == 1.0);
  CHECK(ngram_overlap(P("a", "one two"), P("b", "three four")) == 0.0);
  auto x = P("x", "Tom has 5 apples and 3 pears"), y = P("y", "Sara has 5 apples");
  CHECK(ngram_overlap(x, y) == ngram_overlap(y, x));
  Problem empty;
  empty.id = "empty";
  CHECK_THROWS_AS(ngram_overlap(empty, x), std::invalid_argument);
}

TEST_CASE("pruning near duplicates") {
  auto kept = prune_near_duplicates({P("a", "same text here"), P("b", "same text here")}, 0.8);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].id == "a");

  auto disjoint = prune_near_duplicates({P("a", "one two"), P("b", "three four"), P("c", "five six")});
  CHECK(disjoint.size() == 3);

  // B contains both A and C; A and C share nothing.
  auto A = P("A", "a b c d e"), B = P("B", "a b c d e f g h i j"), C = P("C", "f g h i j");
  REQUIRE(ngram_overlap(A, B) > 0.8);
  REQUIRE(ngram_overlap(B, C) > 0.8);
  REQUIRE(ngram_overlap(A, C) <= 0.8);
  auto chain = prune_near_duplicates({A, B, C}, 0.8);
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].id == "A");
  CHECK(chain[1].id == "C");
}

TEST_CASE("pruned synthetic corpus has no pair above the threshold") {
  auto corpus = generate_corpus(4, 120);
  for (double threshold : {0.8, 0.9}) {
    auto kept = prune_near_duplicates(corpus, threshold);
    CHECK(!kept.empty());
    CHECK(kept.size() <= corpus.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j)
        CHECK(ngram_overlap(kept[i], kept[j]) <= threshold);
  }
}

TEST_CASE("fold sizes") {
  auto ten = make_folds(numbered(10), 5, 1);
  for (const auto& f : ten.folds) CHECK(f.size() == 2);
  auto eleven = make_folds(numbered(11), 5, 1);
  std::vector<std::size_t> sizes;
  for (const auto& f : eleven.folds) sizes.push_back(f.size());
  CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});
}

TEST_CASE("folds partition the data and dev comes from the training folds") {
  auto problems = numbered(23);
  auto split = make_folds(problems, 4, 9);
  std::vector<std::string> all;
  for (const auto& f : split.folds) all.insert(all.end(), f.begin(), f.end());
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  CHECK(all.size() == problems.size());
  for (int f = 0; f < 4; ++f) {
    const auto& test = split.folds[static_cast<std::size_t>(f)];
    for (const auto& id : split.dev[static_cast<std::size_t>(f)])
      CHECK(std::find(test.begin(), test.end(), id) == test.end());
    auto data = fold_data(problems, split, f);
    CHECK(data.train.size() + data.dev.size() + data.test.size() == problems.size());
    CHECK(!data.dev.empty());
    // About 20% of the training split.
    double share = static_cast<double>(data.dev.size()) /
                   static_cast<double>(data.train.size() + data.dev.size());
    CHECK(share == doctest::Approx(0.2).epsilon(0.3));
  }
}

TEST_CASE("folds are deterministic in the seed") {
  auto problems = numbered(30);
  CHECK(make_folds(problems, 5, 3).to_json() == make_folds(problems, 5, 3).to_json());
  CHECK(make_folds(problems, 5, 3).to_json() != make_folds(problems, 5, 4).to_json());
}

TEST_CASE("fold errors") {
  CHECK_THROWS_AS(make_folds(numbered(1), 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_folds(numbered(10), 1, 1), std::invalid_argument);
  auto dup = numbered(5);
  dup.push_back(dup[0]);
  CHECK_THROWS_AS(make_folds(dup, 2, 1), DataError);
}

TEST_CASE("low-overlap subsets keep half, in input order") {
  auto corpus = generate_corpus(2, 61);
  auto lex = lexical_subset(corpus);
  auto tmpl = template_subset(corpus);
  CHECK(lex.size() == 31);
  CHECK(tmpl.size() == 31);
  auto position = [&](const std::string& id) {
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (corpus[i].id == id) return i;
    return corpus.size();
  };
  for (std::size_t i = 1; i < lex.size(); ++i) CHECK(position(lex[i - 1].id) < position(lex[i].id));
  for (std::size_t i = 1; i < tmpl.size(); ++i) CHECK(position(tmpl[i - 1].id) < position(tmpl[i].id));
}

TEST_CASE("the two vocabularies give a low-overlap split") {
  auto corpus = generate_corpus(8, 100);
  std::vector<Problem> even, odd;
  for (std::size_t i = 0; i < corpus.size(); ++i) (i % 2 ? odd : even).push_back(corpus[i]);
  // Names and nouns never cross halves.
  for (const auto& a : even)
    for (const auto& b : odd)
      for (const auto& w : {"apples", "cookies", "tom", "omar"}) {
        bool in_a = std::any_of(a.tokens.begin(), a.tokens.end(), [&](const Token& t) { return t.text == w; });
        bool in_b = std::any_of(b.tokens.begin(), b.tokens.end(), [&](const Token& t) { return t.text == w; });
        CHECK_FALSE((in_a && in_b));
      }
}
