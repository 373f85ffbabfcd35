#include "unitdep/text.h"

#include <array>
#include <cctype>
#include <unordered_map>

namespace unitdep {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return is_digit(c) || is_alpha(c); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Length of a UTF-8 sequence starting with lead byte c.
std::size_t utf8_length(unsigned char c) {
  if (c >= 0xF0) return 4;
  if (c >= 0xE0) return 3;
  if (c >= 0xC0) return 2;
  return 1;
}

std::size_t scan_number(std::string_view text, std::size_t i) {
  std::size_t j = i;
  while (j < text.size() && is_digit(text[j])) ++j;
  // "1,000": a comma followed by exactly three digits.
  while (j + 3 < text.size() && text[j] == ',' && is_digit(text[j + 1]) &&
         is_digit(text[j + 2]) && is_digit(text[j + 3]) &&
         (j + 4 == text.size() || !is_digit(text[j + 4]))) {
    j += 4;
  }
  if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
    ++j;
    while (j < text.size() && is_digit(text[j])) ++j;
  }
  return j;
}

const std::unordered_map<std::string, int>& number_words() {
  static const auto* table = [] {
    auto* m = new std::unordered_map<std::string, int>;
    const std::array<const char*, 20> units = {
        "zero",    "one",     "two",       "three",    "four",
        "five",    "six",     "seven",     "eight",    "nine",
        "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
        "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
    const std::array<const char*, 8> tens = {"twenty", "thirty", "forty", "fifty",
                                             "sixty",  "seventy", "eighty", "ninety"};
    for (int i = 0; i < 20; ++i) (*m)[units[i]] = i;
    for (int t = 0; t < 8; ++t) {
      (*m)[tens[t]] = 20 + 10 * t;
      for (int u = 1; u < 10; ++u) {
        (*m)[std::string(tens[t]) + "-" + units[u]] = 20 + 10 * t + u;
      }
    }
    (*m)["hundred"] = 100;
    (*m)["one hundred"] = 100;
    (*m)["dozen"] = 12;
    return m;
  }();
  return *table;
}

// "one" is a pronoun after these words ("in each one", "the other one").
bool blocks_one(std::string_view previous) {
  static const std::array<std::string_view, 14> words = {
      "each", "every", "the",  "this", "that",  "which", "no",
      "any",  "some",  "other", "another", "last", "first", "next"};
  for (auto w : words) {
    if (previous == w) return true;
  }
  return false;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int sentence = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t j;
    if (is_digit(c)) {
      j = scan_number(text, i);
    } else if (is_alpha(c)) {
      j = i;
      while (j < text.size() && is_alpha(text[j])) ++j;
    } else {
      j = std::min(text.size(), i + utf8_length(static_cast<unsigned char>(c)));
    }
    tokens.push_back({lower(text.substr(i, j - i)), sentence, i, j});
    if (j == i + 1 && (c == '.' || c == '!' || c == '?')) ++sentence;
    i = j;
  }
  return tokens;
}

std::optional<Rational> numeric_value(std::string_view token) {
  if (token.empty() || !is_digit(token.front())) return std::nullopt;
  std::string cleaned;
  for (char c : token) {
    if (c == ',') continue;
    if (!is_digit(c) && c != '.') return std::nullopt;
    cleaned.push_back(c);
  }
  return parse_rational(cleaned);
}

std::string normalize_digits(std::string_view text) {
  const auto& table = number_words();
  std::string out;
  out.reserve(text.size());
  std::string previous_word;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alpha(text[i]) || (i > 0 && is_alnum(text[i - 1]))) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_alpha(text[j])) ++j;
    // Extend across a hyphen into a compound ("twenty-one").
    std::size_t k = j;
    if (k + 1 < text.size() && text[k] == '-' && is_alpha(text[k + 1])) {
      std::size_t m = k + 1;
      while (m < text.size() && is_alpha(text[m])) ++m;
      if (table.count(lower(text.substr(i, m - i)))) k = m;
    }
    std::size_t end = k > j ? k : j;
    if (end < text.size() && is_digit(text[end])) {
      out.append(text.substr(i, end - i));
      previous_word = lower(text.substr(i, end - i));
      i = end;
      continue;
    }
    std::string word = lower(text.substr(i, end - i));

    // "one hundred" as a single number.
    if (word == "one") {
      std::size_t s = end;
      while (s < text.size() && text[s] == ' ') ++s;
      if (s > end && text.substr(s, 7).size() == 7 && lower(text.substr(s, 7)) == "hundred" &&
          (s + 7 == text.size() || !is_alpha(text[s + 7]))) {
        out += "100";
        previous_word = "hundred";
        i = s + 7;
        continue;
      }
    }

    auto it = table.find(word);
    if (it != table.end() && !(word == "one" && blocks_one(previous_word))) {
      out += std::to_string(it->second);
    } else {
      out.append(text.substr(i, end - i));
    }
    previous_word = word;
    i = end;
  }
  return out;
}

}  // namespace unitdep
