#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "unitdep/rational.h"

namespace unitdep {

// Operation labels. SubR and DivR take their operands in reverse order:
// (SubR a b) = b - a. The same set labels the LCA classifier's output.
enum class Op : std::uint8_t { Add, Sub, SubR, Mul, Div, DivR };

inline constexpr std::array<Op, 6> kAllOps = {Op::Add, Op::Sub, Op::SubR,
                                              Op::Mul, Op::Div, Op::DivR};

std::string_view op_symbol(Op op);
std::optional<Op> parse_op(std::string_view symbol);
Op reversed(Op op);
inline bool is_additive(Op op) { return op == Op::Add || op == Op::Sub || op == Op::SubR; }
inline bool is_multiplicative(Op op) { return !is_additive(op); }

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary expression tree whose leaves are quantity indices, each used at most
// once. Nodes are stored in post order; the root is the last node.
class ExprTree {
 public:
  struct Node {
    bool leaf = true;
    Op op = Op::Add;
    int quantity = -1;  // leaves only
    int left = -1;      // internal nodes only
    int right = -1;
    int parent = -1;
  };

  static ExprTree leaf(int quantity);
  // Throws std::invalid_argument if the operands share a quantity.
  static ExprTree combine(Op op, const ExprTree& left, const ExprTree& right);

  int root() const { return static_cast<int>(nodes_.size()) - 1; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const Node> nodes() const { return nodes_; }

  // Used quantity indices, ascending.
  const std::vector<int>& quantities() const { return used_; }
  bool uses(int quantity) const;
  int min_quantity() const { return used_.front(); }
  // Node id of the leaf holding `quantity`; throws std::invalid_argument if
  // the quantity is not used.
  int leaf_of(int quantity) const;

  // Sub-tree rooted at node `id`, as a standalone tree.
  ExprTree subtree(int id) const;

  // Prefix serialization. Leaves print as "#<index>" unless a printer is
  // given: "(/ (- #0 #2) #1)".
  std::string to_prefix(
      const std::function<std::string(int)>& leaf_printer = nullptr) const;

  friend bool operator==(const ExprTree& a, const ExprTree& b);
  friend std::strong_ordering operator<=>(const ExprTree& a, const ExprTree& b);

 private:
  std::vector<Node> nodes_;
  std::vector<int> used_;
};

// Parses the prefix form. `resolve_leaf` maps a leaf token (e.g. "66" or
// "#2") to a quantity index; it may throw. Throws std::invalid_argument on
// syntax errors and repeated quantities.
ExprTree parse_prefix(std::string_view text,
                      const std::function<int(std::string_view)>& resolve_leaf);
// Parses a tree whose leaves are all "#<index>".
ExprTree parse_indexed_prefix(std::string_view text);

// Exact value; `values` is indexed by quantity. Throws EvalError naming the
// offending node on division by zero.
Rational evaluate(const ExprTree& tree, std::span<const Rational> values);

// Operation at the lowest common ancestor of the leaves of qi and qj, seen
// from qi: when qi lies in the right subtree, - and / become -r and /r (and
// vice versa). Callers pass qi as the quantity mentioned first.
Op op_lca(const ExprTree& tree, int qi, int qj);

// Rewrites every maximal +/- region (and every maximal x/÷ region) as a
// left-deep chain: positive terms joined in ascending order of their smallest
// quantity index, then the negative terms subtracted (divided) in the same
// order. Value preserving and idempotent.
ExprTree canonicalize(const ExprTree& tree);
bool is_canonical(const ExprTree& tree);

// Anonymous shape, e.g. "(/ (- _ _) _)", used for template-overlap measures.
std::string shape_signature(const ExprTree& tree);

}  // namespace unitdep
