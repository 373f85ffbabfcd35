#include "unitdep/corpus.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "unitdep/error.h"

namespace unitdep {

namespace {

std::set<std::string> ngrams(const Problem& p) {
  if (p.tokens.empty())
    throw std::invalid_argument("problem '" + p.id + "' has no tokens");
  std::set<std::string> s;
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    s.insert(p.tokens[i].text);
    if (i + 1 < p.tokens.size()) s.insert(p.tokens[i].text + ' ' + p.tokens[i + 1].text);
  }
  return s;
}

double overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t common = 0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& g : small) common += large.count(g);
  return static_cast<double>(common) / static_cast<double>(small.size());
}

void shuffle(std::vector<std::size_t>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

std::vector<Problem> lowest_half(const std::vector<Problem>& problems,
                                 const std::vector<double>& score) {
  std::vector<std::size_t> idx(problems.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  idx.resize((problems.size() + 1) / 2);
  std::sort(idx.begin(), idx.end());
  std::vector<Problem> out;
  for (auto i : idx) out.push_back(problems[i]);
  return out;
}

}  // namespace

double ngram_overlap(const Problem& a, const Problem& b) { return overlap(ngrams(a), ngrams(b)); }

std::vector<Problem> prune_near_duplicates(const std::vector<Problem>& problems,
                                           double threshold) {
  if (!(threshold > 0 && threshold <= 1))
    throw std::invalid_argument("threshold must be in (0, 1]");
  std::vector<Problem> kept;
  std::vector<std::set<std::string>> kept_grams;
  for (const auto& p : problems) {
    auto g = ngrams(p);
    bool dup = std::any_of(kept_grams.begin(), kept_grams.end(),
                           [&](const auto& k) { return overlap(g, k) > threshold; });
    if (dup) continue;
    kept.push_back(p);
    kept_grams.push_back(std::move(g));
  }
  return kept;
}

nlohmann::json DatasetSplit::to_json() const {
  return {{"seed", seed}, {"dev_fraction", dev_fraction}, {"folds", folds}, {"dev", dev}};
}

DatasetSplit make_folds(const std::vector<Problem>& problems, int k, std::uint64_t seed,
                        double dev_fraction) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  if (static_cast<std::size_t>(k) > problems.size())
    throw std::invalid_argument("cannot make " + std::to_string(k) + " folds from " +
                                std::to_string(problems.size()) + " problems");
  if (!(dev_fraction >= 0 && dev_fraction < 1))
    throw std::invalid_argument("dev fraction must be in [0, 1)");
  std::set<std::string> ids;
  for (const auto& p : problems)
    if (!ids.insert(p.id).second) throw DataError("duplicate problem id '" + p.id + "'");

  std::vector<std::size_t> order(problems.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, seed);

  DatasetSplit split;
  split.seed = seed;
  split.dev_fraction = dev_fraction;
  std::size_t base = problems.size() / static_cast<std::size_t>(k);
  std::size_t extra = problems.size() % static_cast<std::size_t>(k);
  std::size_t at = 0;
  for (int f = 0; f < k; ++f) {
    std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    std::vector<std::string> fold;
    for (std::size_t i = 0; i < size; ++i) fold.push_back(problems[order[at++]].id);
    split.folds.push_back(std::move(fold));
  }
  for (int f = 0; f < k; ++f) {
    std::vector<std::string> train;
    for (int g = 0; g < k; ++g)
      if (g != f) train.insert(train.end(), split.folds[static_cast<std::size_t>(g)].begin(),
                               split.folds[static_cast<std::size_t>(g)].end());
    std::vector<std::size_t> pick(train.size());
    std::iota(pick.begin(), pick.end(), 0);
    shuffle(pick, seed + static_cast<std::uint64_t>(f) + 1);
    auto count = static_cast<std::size_t>(std::llround(dev_fraction * static_cast<double>(train.size())));
    if (dev_fraction > 0 && count == 0) count = 1;
    if (count >= train.size()) count = train.size() - 1;
    pick.resize(count);
    std::sort(pick.begin(), pick.end());
    std::vector<std::string> dev;
    for (auto i : pick) dev.push_back(train[i]);
    split.dev.push_back(std::move(dev));
  }
  return split;
}

FoldData fold_data(const std::vector<Problem>& problems, const DatasetSplit& split, int fold) {
  if (fold < 0 || static_cast<std::size_t>(fold) >= split.k())
    throw std::out_of_range("fold index out of range");
  std::set<std::string> test(split.folds[static_cast<std::size_t>(fold)].begin(),
                             split.folds[static_cast<std::size_t>(fold)].end());
  std::set<std::string> dev(split.dev[static_cast<std::size_t>(fold)].begin(),
                            split.dev[static_cast<std::size_t>(fold)].end());
  FoldData out;
  for (const auto& p : problems) {
    if (test.count(p.id)) out.test.push_back(p);
    else if (dev.count(p.id)) out.dev.push_back(p);
    else out.train.push_back(p);
  }
  return out;
}

std::vector<Problem> lexical_subset(const std::vector<Problem>& problems) {
  std::vector<std::set<std::string>> grams;
  for (const auto& p : problems) grams.push_back(ngrams(p));
  std::vector<double> mean(problems.size(), 0.0);
  for (std::size_t i = 0; i < problems.size(); ++i) {
    for (std::size_t j = i + 1; j < problems.size(); ++j) {
      double o = overlap(grams[i], grams[j]);
      mean[i] += o;
      mean[j] += o;
    }
  }
  if (problems.size() > 1)
    for (auto& m : mean) m /= static_cast<double>(problems.size() - 1);
  return lowest_half(problems, mean);
}

std::vector<Problem> template_subset(const std::vector<Problem>& problems) {
  std::vector<std::string> sig;
  std::map<std::string, std::size_t> count;
  for (const auto& p : problems) {
    sig.push_back(p.gold && p.gold->tree ? shape_signature(*p.gold->tree) : "?" + p.id);
    ++count[sig.back()];
  }
  std::vector<double> share(problems.size(), 0.0);
  if (problems.size() > 1)
    for (std::size_t i = 0; i < problems.size(); ++i)
      share[i] = static_cast<double>(count[sig[i]] - 1) / static_cast<double>(problems.size() - 1);
  return lowest_half(problems, share);
}

}  // namespace unitdep
