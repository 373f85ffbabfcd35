#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitdep/problem.h"

namespace unitdep {

// |S1 ∩ S2| / min(|S1|, |S2|) over the sets of token unigrams and bigrams.
// Throws std::invalid_argument if either problem has no tokens.
double ngram_overlap(const Problem& a, const Problem& b);

// Greedy in input order: a problem is kept iff its overlap with every kept
// problem is at most `threshold`.
std::vector<Problem> prune_near_duplicates(const std::vector<Problem>& problems,
                                           double threshold = 0.8);

struct DatasetSplit {
  std::vector<std::vector<std::string>> folds;  // problem ids
  std::vector<std::vector<std::string>> dev;    // per fold, drawn from its training folds
  double dev_fraction = 0.2;
  std::uint64_t seed = 0;

  std::size_t k() const { return folds.size(); }
  nlohmann::json to_json() const;
};

// Shuffles with the seed and cuts into k folds whose sizes differ by at most
// one (larger folds first). Throws std::invalid_argument if k < 2 or k
// exceeds the number of problems, DataError on duplicate ids.
DatasetSplit make_folds(const std::vector<Problem>& problems, int k, std::uint64_t seed,
                        double dev_fraction = 0.2);

struct FoldData {
  std::vector<Problem> train;  // training folds minus dev
  std::vector<Problem> dev;
  std::vector<Problem> test;
};

FoldData fold_data(const std::vector<Problem>& problems, const DatasetSplit& split, int fold);

// Lowest-overlap half (rounded up) in input order: by mean pairwise n-gram
// overlap, or by the share of other problems with the same gold-tree shape.
std::vector<Problem> lexical_subset(const std::vector<Problem>& problems);
std::vector<Problem> template_subset(const std::vector<Problem>& problems);

}  // namespace unitdep
