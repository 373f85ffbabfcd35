#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unitdep/expr_tree.h"
#include "unitdep/rational.h"
#include "unitdep/text.h"

namespace unitdep {

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  bool empty() const { return begin >= end; }
  std::size_t size() const { return end - begin; }
};

struct Quantity {
  int index = 0;        // mention order
  Rational value;
  TokenRange span;      // always a single numeric token
  std::string surface;  // token text as written, e.g. "18.0"
};

struct GoldAnnotation {
  Rational answer;
  std::optional<ExprTree> tree;
  // Vertices annotated as rates; the question is vertex n.
  std::optional<std::set<int>> rates;
};

struct Problem {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<Quantity> quantities;
  TokenRange question;
  std::optional<GoldAnnotation> gold;

  int num_quantities() const { return static_cast<int>(quantities.size()); }
  // Vertex id of the question in unit dependency graphs.
  int question_vertex() const { return num_quantities(); }
  std::vector<Rational> values() const;
  // Prints the tree with quantity surfaces as leaves, falling back to "#i"
  // where a bare value would resolve to a different mention.
  std::string format_tree(const ExprTree& tree) const;
  // Leaves are "#i" or a number, which resolves to the first not yet used
  // quantity of equal value in mention order.
  ExprTree parse_tree(std::string_view prefix) const;
};

// All maximal numeric tokens of already digit-normalized text, in order.
std::vector<Quantity> extract_quantities(std::string_view text);

// Tokenizes, extracts quantities, and locates the question: from the first
// "how"/"what"/"find" token of the last sentence to its end, or the whole
// last sentence. Throws DataError on text without tokens.
Problem make_problem(std::string id, std::string text);

// JSON-lines record: {"id", "text", "answer", "tree"?, "rates"?}. Gold trees
// are stored in canonical form. Numbers are
// decimal strings. "rates" lists 0-based quantity indices and "question".
Problem problem_from_json(const nlohmann::json& record);
nlohmann::json problem_to_json(const Problem& problem);

// Throws DataError with the offending 1-based line number.
std::vector<Problem> read_problems(const std::string& path);
void write_problems(const std::string& path, const std::vector<Problem>& problems);

}  // namespace unitdep
