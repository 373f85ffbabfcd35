#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unitdep/rational.h"

namespace unitdep {

struct Token {
  std::string text;      // lowercased surface form
  int sentence = 0;      // 0-based sentence index
  std::size_t begin = 0; // byte offsets into the source text
  std::size_t end = 0;
};

// Lowercases and splits on whitespace and punctuation. Runs of digits with an
// interior decimal point ("18.0") or thousands separators ("1,000") stay one
// token. Every punctuation character, and every non-ASCII UTF-8 sequence,
// becomes its own token. Sentences end after '.', '!' or '?'.
std::vector<Token> tokenize(std::string_view text);

// Exact value of a numeric token, or nullopt for any other token.
std::optional<Rational> numeric_value(std::string_view token);

// Rewrites number words (zero..one hundred, hyphenated compounds such as
// "twenty-one", and "dozen") as digit strings. All other bytes are copied
// through unchanged; the function is idempotent.
std::string normalize_digits(std::string_view text);

}  // namespace unitdep
