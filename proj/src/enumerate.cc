#include "unitdep/enumerate.h"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace unitdep {

namespace {

using Mask = std::uint32_t;

struct Candidate {
  ExprTree tree;
  Rational value;
};

// Builds canonical trees bottom up. For a subset S, `additive(S)` holds the
// trees whose root is +/-, `multiplicative(S)` those whose root is x/÷.
// A region's terms are leaves or trees rooted in the other region kind.
class Generator {
 public:
  explicit Generator(std::span<const Rational> values) : values_(values) {}

  // Trees over exactly the quantities in `s`. Proper subsets are memoized;
  // the caller decides whether to stream or store the top level.
  void visit_subset(Mask s, const std::function<void(const Candidate&)>& out) {
    if (std::popcount(s) == 1) {
      int q = std::countr_zero(s);
      out({ExprTree::leaf(q), values_[static_cast<std::size_t>(q)]});
      return;
    }
    build_region(s, true, out);
    build_region(s, false, out);
  }

 private:
  const std::vector<Candidate>& region(Mask s, bool additive) {
    auto& memo = additive ? additive_ : multiplicative_;
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    std::vector<Candidate> list;
    build_region(s, additive, [&](const Candidate& c) { list.push_back(c); });
    return memo.emplace(s, std::move(list)).first->second;
  }

  // Term choices for one block of a region of kind `additive`.
  const std::vector<Candidate>& terms_for(Mask block, bool additive) {
    if (std::popcount(block) == 1) {
      auto it = leaves_.find(block);
      if (it != leaves_.end()) return it->second;
      int q = std::countr_zero(block);
      std::vector<Candidate> single{{ExprTree::leaf(q), values_[static_cast<std::size_t>(q)]}};
      return leaves_.emplace(block, std::move(single)).first->second;
    }
    return region(block, !additive);
  }

  void build_region(Mask s, bool additive, const std::function<void(const Candidate&)>& out) {
    std::vector<Mask> blocks;
    for_each_partition(s, blocks, [&](const std::vector<Mask>& partition) {
      if (partition.size() < 2) return;
      std::vector<const std::vector<Candidate>*> choices;
      choices.reserve(partition.size());
      for (Mask b : partition) choices.push_back(&terms_for(b, additive));
      const std::size_t k = partition.size();
      // Sign patterns: bit i set means block i is negative; at least one
      // block stays positive.
      for (Mask signs = 0; signs < (Mask{1} << k) - 1; ++signs) {
        std::vector<std::size_t> pick(k, 0);
        for (;;) {
          emit(choices, pick, signs, additive, out);
          std::size_t i = 0;
          while (i < k && ++pick[i] == choices[i]->size()) pick[i++] = 0;
          if (i == k) break;
        }
      }
    });
  }

  void emit(const std::vector<const std::vector<Candidate>*>& choices,
            const std::vector<std::size_t>& pick, Mask signs, bool additive,
            const std::function<void(const Candidate&)>& out) {
    // Blocks are ordered by smallest element, so positives then negatives
    // in block order is the canonical chain order.
    const Candidate* first = nullptr;
    std::vector<const Candidate*> rest_pos, rest_neg;
    for (std::size_t i = 0; i < choices.size(); ++i) {
      const Candidate* c = &(*choices[i])[pick[i]];
      if (signs & (Mask{1} << i)) {
        rest_neg.push_back(c);
      } else if (!first) {
        first = c;
      } else {
        rest_pos.push_back(c);
      }
    }
    Rational value = first->value;
    for (const Candidate* c : rest_neg) {
      if (!additive && c->value == 0) return;
    }
    ExprTree tree = first->tree;
    for (const Candidate* c : rest_pos) {
      tree = ExprTree::combine(additive ? Op::Add : Op::Mul, tree, c->tree);
      if (additive) value += c->value; else value *= c->value;
    }
    for (const Candidate* c : rest_neg) {
      tree = ExprTree::combine(additive ? Op::Sub : Op::Div, tree, c->tree);
      if (additive) value -= c->value; else value /= c->value;
    }
    out({std::move(tree), std::move(value)});
  }

  // Set partitions of `s`, blocks listed in order of their smallest element.
  static void for_each_partition(Mask s, std::vector<Mask>& blocks,
                                 const std::function<void(const std::vector<Mask>&)>& fn) {
    if (s == 0) {
      fn(blocks);
      return;
    }
    const Mask low = s & (~s + 1);
    const Mask rest = s & ~low;
    // Every subset of `rest` may join the lowest element's block.
    for (Mask sub = rest;; sub = (sub - 1) & rest) {
      blocks.push_back(low | sub);
      for_each_partition(rest & ~sub, blocks, fn);
      blocks.pop_back();
      if (sub == 0) break;
    }
  }

  std::span<const Rational> values_;
  std::map<Mask, std::vector<Candidate>> additive_;
  std::map<Mask, std::vector<Candidate>> multiplicative_;
  std::map<Mask, std::vector<Candidate>> leaves_;
};

std::vector<Mask> subsets_in_order(std::size_t n, std::size_t min_size) {
  std::vector<std::pair<std::vector<int>, Mask>> subsets;
  for (Mask s = 1; s < (Mask{1} << n); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) < min_size) continue;
    std::vector<int> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (s & (Mask{1} << i)) idx.push_back(static_cast<int>(i));
    }
    subsets.emplace_back(std::move(idx), s);
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  std::vector<Mask> out;
  for (auto& [idx, s] : subsets) out.push_back(s);
  return out;
}

}  // namespace

void for_each_tree(std::span<const Rational> values, std::size_t max_irrelevant,
                   const TreeVisitor& visit) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("tree enumeration needs at least one quantity");
  if (n > kMaxEnumeratedQuantities) {
    throw std::invalid_argument("tree enumeration supports at most " +
                                std::to_string(kMaxEnumeratedQuantities) +
                                " quantities, got " + std::to_string(n));
  }
  const std::size_t min_size = max_irrelevant >= n ? 1 : n - max_irrelevant;
  Generator gen(values);
  for (Mask s : subsets_in_order(n, min_size)) {
    gen.visit_subset(s, [&](const Candidate& c) {
      if (c.value > 0) visit(c.tree, c.value);
    });
  }
}

std::vector<EnumeratedTree> enumerate_trees(std::span<const Rational> values,
                                            std::size_t max_irrelevant) {
  std::vector<EnumeratedTree> out;
  for_each_tree(values, max_irrelevant, [&](const ExprTree& t, const Rational& v) {
    out.push_back({t, v});
  });
  return out;
}

}  // namespace unitdep
