#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "unitdep/expr_tree.h"
#include "unitdep/rational.h"

namespace unitdep {

// Upper bound on the number of quantities the exhaustive enumerator accepts.
// Six quantities already yield ~1.3M canonical trees.
inline constexpr std::size_t kMaxEnumeratedQuantities = 6;

struct EnumeratedTree {
  ExprTree tree;
  Rational value;
};

using TreeVisitor = std::function<void(const ExprTree&, const Rational&)>;

// Streams every canonical monotone tree over every subset of the quantities
// that leaves out at most `max_irrelevant` of them, and whose value is
// strictly positive. No divisor evaluates to zero. Order: subset size
// descending, then subsets lexicographically by index list, then a fixed
// generation order within a subset. Throws std::invalid_argument when there
// are no quantities or more than kMaxEnumeratedQuantities.
void for_each_tree(std::span<const Rational> values, std::size_t max_irrelevant,
                   const TreeVisitor& visit);

std::vector<EnumeratedTree> enumerate_trees(std::span<const Rational> values,
                                            std::size_t max_irrelevant);

inline std::vector<EnumeratedTree> enumerate_trees(std::span<const Rational> values) {
  return enumerate_trees(values, values.size());
}

}  // namespace unitdep
