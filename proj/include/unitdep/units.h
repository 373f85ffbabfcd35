#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unitdep/problem.h"

namespace unitdep {

// Coarse part-of-speech classes from a closed-class lexicon plus suffix
// rules; anything unrecognized is a noun.
enum class Pos { Noun, Verb, Adj, Num, Other };

Pos coarse_pos(std::string_view token);
std::string_view pos_name(Pos pos);

// Suffix-stripping noun lemmatizer (-s, -es, -ies, a few irregulars).
// lemmatize(lemmatize(w)) == lemmatize(w).
std::string lemmatize(std::string_view word);

struct QuantityUnit {
  std::vector<std::string> surface;  // lemmas of the nearest noun phrase
  std::optional<std::vector<std::string>> num;
  std::optional<std::vector<std::string>> den;

  // Whether the trigger rules detected an "A per B" construction.
  bool rule_rate() const { return den.has_value(); }
};

// Unit of quantity `vertex`, or of the question when vertex ==
// problem.question_vertex(). Never fails; an empty surface means no unit
// token was found. Throws std::out_of_range for other vertex ids.
QuantityUnit extract_unit(const Problem& problem, int vertex);

// Units of all n + 1 vertices.
std::vector<QuantityUnit> extract_units(const Problem& problem);

bool share_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b);
bool units_share_tokens(const QuantityUnit& a, const QuantityUnit& b);

}  // namespace unitdep
