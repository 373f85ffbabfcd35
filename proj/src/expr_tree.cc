#include "unitdep/expr_tree.h"

#include <algorithm>
#include <cctype>

namespace unitdep {

std::string_view op_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::SubR: return "-r";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::DivR: return "/r";
  }
  return "?";
}

std::optional<Op> parse_op(std::string_view symbol) {
  for (Op op : kAllOps) {
    if (op_symbol(op) == symbol) return op;
  }
  return std::nullopt;
}

Op reversed(Op op) {
  switch (op) {
    case Op::Sub: return Op::SubR;
    case Op::SubR: return Op::Sub;
    case Op::Div: return Op::DivR;
    case Op::DivR: return Op::Div;
    default: return op;
  }
}

ExprTree ExprTree::leaf(int quantity) {
  if (quantity < 0) throw std::invalid_argument("negative quantity index");
  ExprTree t;
  t.nodes_.push_back(Node{true, Op::Add, quantity, -1, -1, -1});
  t.used_ = {quantity};
  return t;
}

ExprTree ExprTree::combine(Op op, const ExprTree& left, const ExprTree& right) {
  ExprTree t;
  std::set_union(left.used_.begin(), left.used_.end(), right.used_.begin(),
                 right.used_.end(), std::back_inserter(t.used_));
  if (t.used_.size() != left.used_.size() + right.used_.size()) {
    throw std::invalid_argument("quantity used more than once in expression");
  }
  t.nodes_.reserve(left.nodes_.size() + right.nodes_.size() + 1);
  t.nodes_ = left.nodes_;
  const int offset = static_cast<int>(left.nodes_.size());
  for (Node n : right.nodes_) {
    if (!n.leaf) {
      n.left += offset;
      n.right += offset;
    }
    if (n.parent >= 0) n.parent += offset;
    t.nodes_.push_back(n);
  }
  const int root = static_cast<int>(t.nodes_.size());
  const int left_root = offset - 1;
  const int right_root = root - 1;
  t.nodes_[static_cast<std::size_t>(left_root)].parent = root;
  t.nodes_[static_cast<std::size_t>(right_root)].parent = root;
  t.nodes_.push_back(Node{false, op, -1, left_root, right_root, -1});
  return t;
}

bool ExprTree::uses(int quantity) const {
  return std::binary_search(used_.begin(), used_.end(), quantity);
}

int ExprTree::leaf_of(int quantity) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].leaf && nodes_[i].quantity == quantity) return static_cast<int>(i);
  }
  throw std::invalid_argument("quantity #" + std::to_string(quantity) +
                              " is not used in " + to_prefix());
}

ExprTree ExprTree::subtree(int id) const {
  const Node& n = node(id);
  if (n.leaf) return leaf(n.quantity);
  return combine(n.op, subtree(n.left), subtree(n.right));
}

std::string ExprTree::to_prefix(const std::function<std::string(int)>& leaf_printer) const {
  std::function<void(int, std::string&)> emit = [&](int id, std::string& out) {
    const Node& n = node(id);
    if (n.leaf) {
      out += leaf_printer ? leaf_printer(n.quantity) : "#" + std::to_string(n.quantity);
      return;
    }
    out += '(';
    out += op_symbol(n.op);
    out += ' ';
    emit(n.left, out);
    out += ' ';
    emit(n.right, out);
    out += ')';
  };
  std::string out;
  emit(root(), out);
  return out;
}

namespace {

auto node_key(const ExprTree::Node& n) {
  return std::tuple(n.leaf, static_cast<int>(n.op), n.quantity, n.left, n.right);
}

}  // namespace

bool operator==(const ExprTree& a, const ExprTree& b) {
  return a.nodes_.size() == b.nodes_.size() &&
         std::equal(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(),
                    [](const auto& x, const auto& y) { return node_key(x) == node_key(y); });
}

std::strong_ordering operator<=>(const ExprTree& a, const ExprTree& b) {
  if (auto c = a.nodes_.size() <=> b.nodes_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    if (auto c = node_key(a.nodes_[i]) <=> node_key(b.nodes_[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PrefixParser {
 public:
  PrefixParser(std::string_view text, const std::function<int(std::string_view)>& resolve)
      : text_(text), resolve_(resolve) {}

  ExprTree parse() {
    ExprTree t = expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad expression '" + std::string(text_) + "' at offset " +
                                std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected a token");
    return text_.substr(start, pos_ - start);
  }

  ExprTree expr() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (text_[pos_] != '(') return ExprTree::leaf(resolve_(atom()));
    ++pos_;
    auto symbol = atom();
    auto op = parse_op(symbol);
    if (!op) fail("unknown operator '" + std::string(symbol) + "'");
    ExprTree left = expr();
    ExprTree right = expr();
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
    ++pos_;
    return ExprTree::combine(*op, left, right);
  }

  std::string_view text_;
  const std::function<int(std::string_view)>& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprTree parse_prefix(std::string_view text,
                      const std::function<int(std::string_view)>& resolve_leaf) {
  return PrefixParser(text, resolve_leaf).parse();
}

ExprTree parse_indexed_prefix(std::string_view text) {
  return parse_prefix(text, [](std::string_view token) {
    if (token.size() < 2 || token[0] != '#') {
      throw std::invalid_argument("expected '#<index>' leaf, got '" + std::string(token) + "'");
    }
    return std::stoi(std::string(token.substr(1)));
  });
}

// ---------------------------------------------------------------------------
// Evaluation and LCA queries

Rational evaluate(const ExprTree& tree, std::span<const Rational> values) {
  std::vector<Rational> at(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(static_cast<int>(i));
    if (n.leaf) {
      if (n.quantity >= static_cast<int>(values.size())) {
        throw std::invalid_argument("no value for quantity #" + std::to_string(n.quantity));
      }
      at[i] = values[static_cast<std::size_t>(n.quantity)];
      continue;
    }
    const Rational& l = at[static_cast<std::size_t>(n.left)];
    const Rational& r = at[static_cast<std::size_t>(n.right)];
    const Rational* divisor = n.op == Op::Div ? &r : n.op == Op::DivR ? &l : nullptr;
    if (divisor && *divisor == 0) {
      throw EvalError("division by zero at node " + tree.subtree(static_cast<int>(i)).to_prefix());
    }
    switch (n.op) {
      case Op::Add: at[i] = l + r; break;
      case Op::Sub: at[i] = l - r; break;
      case Op::SubR: at[i] = r - l; break;
      case Op::Mul: at[i] = l * r; break;
      case Op::Div: at[i] = l / r; break;
      case Op::DivR: at[i] = r / l; break;
    }
  }
  return at.back();
}

Op op_lca(const ExprTree& tree, int qi, int qj) {
  if (qi == qj) throw std::invalid_argument("op_lca needs two distinct quantities");
  int a = tree.leaf_of(qi);
  int b = tree.leaf_of(qj);
  std::vector<int> up_a;  // ancestors of qi's leaf including itself
  for (int x = a; x >= 0; x = tree.node(x).parent) up_a.push_back(x);
  int prev = b;
  for (int x = tree.node(b).parent; x >= 0; prev = x, x = tree.node(x).parent) {
    auto it = std::find(up_a.begin(), up_a.end(), x);
    if (it == up_a.end()) continue;
    const auto& lca = tree.node(x);
    // prev is the child of the LCA on qj's side.
    return lca.right == prev ? lca.op : reversed(lca.op);
  }
  throw std::logic_error("leaves have no common ancestor");
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

struct Term {
  ExprTree tree;
  bool positive;
};

ExprTree canonical_node(const ExprTree& t, int id);

void collect_terms(const ExprTree& t, int id, bool positive, bool additive,
                   std::vector<Term>& terms) {
  const auto& n = t.node(id);
  if (!n.leaf && is_additive(n.op) == additive) {
    const bool negate_left = n.op == Op::SubR || n.op == Op::DivR;
    const bool negate_right = n.op == Op::Sub || n.op == Op::Div;
    collect_terms(t, n.left, negate_left ? !positive : positive, additive, terms);
    collect_terms(t, n.right, negate_right ? !positive : positive, additive, terms);
    return;
  }
  terms.push_back({canonical_node(t, id), positive});
}

ExprTree canonical_node(const ExprTree& t, int id) {
  const auto& n = t.node(id);
  if (n.leaf) return ExprTree::leaf(n.quantity);
  const bool additive = is_additive(n.op);
  std::vector<Term> terms;
  collect_terms(t, id, true, additive, terms);
  std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
    if (x.positive != y.positive) return x.positive;
    return x.tree.min_quantity() < y.tree.min_quantity();
  });
  // A region always has a positive leftmost term.
  ExprTree acc = terms.front().tree;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    Op op = terms[i].positive ? (additive ? Op::Add : Op::Mul)
                              : (additive ? Op::Sub : Op::Div);
    acc = ExprTree::combine(op, acc, terms[i].tree);
  }
  return acc;
}

}  // namespace

ExprTree canonicalize(const ExprTree& tree) { return canonical_node(tree, tree.root()); }

bool is_canonical(const ExprTree& tree) { return canonicalize(tree) == tree; }

std::string shape_signature(const ExprTree& tree) {
  return tree.to_prefix([](int) { return std::string("_"); });
}

}  // namespace unitdep
