#include "unitdep/units.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace unitdep {

namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet kOther = {
    "a", "an", "the", "this", "that", "these", "those", "each", "every", "some", "any",
    "all", "both", "few", "many", "much", "more", "most", "less", "no", "not", "nor",
    "other", "another", "such", "so", "than", "too", "very", "just", "also", "only",
    "still", "now", "then", "there", "here", "when", "where", "why", "how", "what",
    "which", "who", "whom", "whose", "whether", "if", "because", "as", "of", "in", "on",
    "at", "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "up", "down", "out",
    "off", "over", "under", "again", "once", "and", "but", "or", "yet", "per", "he",
    "she", "it", "they", "we", "you", "i", "me", "him", "her", "us", "them", "his",
    "its", "their", "our", "your", "my", "mine", "yours", "theirs", "hers", "ours",
    "ones", "someone", "everyone", "anyone", "something", "anything", "everything",
    "nothing", "s", "t", "away", "back", "altogether", "together", "equally",
    "total", "left", "among", "around", "while", "since", "until", "till", "each",
    "single", "same", "evenly", "already", "later", "today", "yesterday", "tomorrow"};

const WordSet kVerbs = {
    "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had",
    "having", "do", "does", "did", "done", "can", "could", "will", "would", "shall",
    "should", "may", "might", "must", "get", "gets", "got", "make", "makes", "made",
    "buy", "buys", "bought", "give", "gives", "gave", "given", "take", "takes", "took",
    "sell", "sells", "sold", "pick", "picks", "eat", "eats", "ate", "eaten", "find",
    "finds", "found", "put", "puts", "need", "needs", "want", "wants", "use", "uses",
    "pay", "pays", "paid", "earn", "earns", "spend", "spends", "spent", "read", "reads",
    "run", "runs", "ran", "drive", "drives", "drove", "walk", "walks", "fill", "fills",
    "hold", "holds", "held", "cost", "costs", "leave", "leaves", "grow", "grows", "grew",
    "win", "wins", "won", "lose", "loses", "lost", "save", "saves", "bake", "bakes",
    "cut", "cuts", "share", "shares", "split", "splits", "pack", "packs", "pour",
    "pours", "bring", "brings", "brought", "see", "saw", "sees", "keep", "keeps", "kept",
    "throw", "throws", "threw", "send", "sends", "sent", "receive", "receives", "go",
    "goes", "went", "come", "comes", "came", "tip", "fit", "fits", "contain",
    "contains", "collect", "collects", "plant", "plants", "arrange", "arranges",
    "divide", "divides", "put", "place", "places", "store", "stores", "sew", "knit",
    "wrap", "wraps", "travel", "travels", "swim", "swims", "swam", "ride", "rides",
    "rode", "fly", "flies", "flew", "write", "writes", "wrote", "sing", "sang", "draw",
    "drew", "owe", "owes", "lend", "lent", "borrow", "borrows", "hand", "hands",
    "pass", "passes", "add", "adds", "remove", "removes", "break", "broke", "broken",
    "spoil", "spoils", "wilt", "wilts", "melt", "melts", "hatch", "hatches", "bloom",
    "blooms", "grow", "sort", "sorts", "stack", "stacks", "load", "loads", "serve",
    "serves", "feed", "feeds", "fed", "catch", "catches", "caught", "sleep", "slept"};

const WordSet kAdjectives = {
    "red", "blue", "green", "yellow", "white", "black", "pink", "purple", "orange",
    "big", "small", "large", "little", "new", "old", "additional", "extra", "full",
    "empty", "different", "equal", "whole", "remaining", "several", "long", "short",
    "tall", "many", "fresh", "ripe", "rotten", "broken", "good", "bad", "old", "young",
    "favorite", "rare", "shiny", "tiny", "huge", "wooden", "glass"};

// Nouns that the -ing/-ed suffix rules would mistake for verbs.
const WordSet kSuffixNouns = {
    "wedding", "building", "ceiling", "morning", "evening", "painting", "string",
    "thing", "things", "ring", "king", "spring", "clothing", "icing", "stuffing",
    "pudding", "frosting", "filling", "bed", "shed", "sled", "seed", "weed", "speed",
    "sheep", "buildings", "paintings", "rings", "strings", "seeds", "beds", "sleds",
    "crackling", "earring", "earrings", "dumpling", "dumplings", "sapling", "saplings",
    "duckling", "ducklings", "lid", "pyramid", "hundred"};

// First names that may start a sentence; treated as proper nouns.
const WordSet kNames = {
    "isabel", "isabella", "melanie", "sam", "john", "tom", "sara", "sarah", "mike",
    "lisa", "ben", "anna", "jake", "emma", "mia", "noah", "liam", "olivia", "ava",
    "ethan", "lucas", "zoe", "chloe", "ryan", "kate", "dan", "amy", "joan", "fred",
    "tim", "sally", "nancy", "mary", "jason", "keith", "alyssa", "sandy", "dave",
    "jessica", "mrs", "mr", "ms", "carlos", "maria", "ali", "omar", "nina", "leo",
    "ivy", "max", "ruby", "owen", "grace", "henry", "lily", "jack", "ella", "luke",
    "rosa", "hugo", "iris", "otto", "vera", "paul", "rita", "alan", "june", "dora"};

const WordSet kNumberWords = {"one",  "two",   "three", "four", "five", "six", "seven",
                              "eight", "nine", "ten",   "dozen"};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string lemma_step(std::string_view w) {
  static const std::unordered_map<std::string_view, std::string_view> irregular = {
      {"people", "person"}, {"children", "child"}, {"men", "man"},
      {"women", "woman"},   {"feet", "foot"},      {"teeth", "tooth"},
      {"mice", "mouse"},    {"geese", "goose"},    {"shelves", "shelf"},
      {"leaves", "leaf"},   {"knives", "knife"},   {"loaves", "loaf"},
      {"halves", "half"},   {"wolves", "wolf"},    {"calves", "calf"},
      {"lives", "life"},    {"wives", "wife"},     {"sheep", "sheep"},
      {"fish", "fish"},     {"deer", "deer"}};
  static const WordSet ie_plurals = {"cookies",  "pies",   "movies",    "brownies",
                                     "ties",     "calories", "rookies", "zombies",
                                     "smoothies", "veggies", "hoodies", "lies",
                                     "goalies",   "pixies"};
  static const WordSet oes_plurals = {"potatoes", "tomatoes", "heroes", "mangoes", "echoes"};

  if (auto it = irregular.find(w); it != irregular.end()) return std::string(it->second);
  if (ie_plurals.count(w)) return std::string(w.substr(0, w.size() - 1));
  if (oes_plurals.count(w)) return std::string(w.substr(0, w.size() - 2));
  if (w.size() > 4 && ends_with(w, "ies")) return std::string(w.substr(0, w.size() - 3)) + "y";
  if (w.size() > 3 && ends_with(w, "es")) {
    auto stem = w.substr(0, w.size() - 2);
    if (ends_with(stem, "ss") || ends_with(stem, "us") || ends_with(stem, "x") ||
        ends_with(stem, "z") || ends_with(stem, "ch") || ends_with(stem, "sh")) {
      return std::string(stem);
    }
  }
  if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return std::string(w.substr(0, w.size() - 1));
  }
  return std::string(w);
}

bool is_proper(const Problem& p, std::size_t i) {
  const auto& tok = p.tokens[i];
  if (kNames.count(tok.text)) return true;
  const bool sentence_initial = i == 0 || p.tokens[i - 1].sentence != tok.sentence;
  const char first = p.text[tok.begin];
  return !sentence_initial && std::isupper(static_cast<unsigned char>(first));
}

bool is_unit_noun(const Problem& p, std::size_t i) {
  return coarse_pos(p.tokens[i].text) == Pos::Noun && !is_proper(p, i);
}

bool is_number_token(const Problem& p, std::size_t i) {
  return numeric_value(p.tokens[i].text).has_value();
}

struct Sentence {
  std::size_t begin, end;
};

Sentence sentence_of(const Problem& p, std::size_t i) {
  std::size_t b = i, e = i + 1;
  while (b > 0 && p.tokens[b - 1].sentence == p.tokens[i].sentence) --b;
  while (e < p.tokens.size() && p.tokens[e].sentence == p.tokens[i].sentence) ++e;
  return {b, e};
}

// Lemmas of the noun run starting at i; `end` receives the index after it.
std::vector<std::string> noun_run(const Problem& p, std::size_t i, std::size_t limit,
                                  std::size_t* end = nullptr) {
  std::vector<std::string> run;
  std::size_t k = i;
  for (; k < limit && is_unit_noun(p, k); ++k) run.push_back(lemmatize(p.tokens[k].text));
  if (end) *end = k;
  return run;
}

// First noun run in [from, to), not crossing another number.
std::optional<std::pair<std::vector<std::string>, std::size_t>> noun_after(
    const Problem& p, std::size_t from, std::size_t to) {
  for (std::size_t k = from; k < to; ++k) {
    if (is_number_token(p, k)) return std::nullopt;
    if (is_unit_noun(p, k)) {
      std::size_t end;
      auto run = noun_run(p, k, to, &end);
      return std::pair{std::move(run), end};
    }
  }
  return std::nullopt;
}

// Nearest noun run ending before `t`, within [begin, t).
std::optional<std::vector<std::string>> noun_before(const Problem& p, std::size_t begin,
                                                    std::size_t t) {
  for (std::size_t k = t; k-- > begin;) {
    if (!is_unit_noun(p, k)) continue;
    std::size_t start = k;
    while (start > begin && is_unit_noun(p, start - 1)) --start;
    return noun_run(p, start, k + 1);
  }
  return std::nullopt;
}

bool is_determiner(std::string_view w) {
  return w == "a" || w == "an" || w == "the" || w == "each" || w == "every" || w == "one" ||
         w == "single";
}

// Noun run following a trigger word at k, skipping determiners.
std::optional<std::vector<std::string>> noun_after_trigger(const Problem& p, std::size_t k,
                                                           std::size_t limit) {
  std::size_t j = k + 1;
  while (j < limit && is_determiner(p.tokens[j].text) && p.tokens[j].text != "one") ++j;
  if (j < limit && is_unit_noun(p, j)) return noun_run(p, j, limit);
  return std::nullopt;
}

constexpr std::size_t kUnitWindow = 5;

// Applies the rate triggers after an anchor (the number, or the question's
// unit noun). `unit_end` is the index after the surface noun run, if the run
// followed the anchor.
void detect_rate(const Problem& p, std::size_t anchor, std::optional<std::size_t> unit_end,
                 const Sentence& s, bool allow_each_before, QuantityUnit& unit) {
  const std::size_t window_end = std::min(s.end, anchor + 1 + kUnitWindow + 1);
  std::vector<std::string> den;
  bool found = false;

  // "per" and "/" take precedence.
  for (std::size_t k = anchor + 1; k < window_end && !found; ++k) {
    if (k != anchor + 1 && is_number_token(p, k)) break;
    const auto& w = p.tokens[k].text;
    if (w == "per" || w == "/") {
      if (auto d = noun_after_trigger(p, k, s.end)) {
        den = *d;
        found = true;
      }
    }
  }
  // "each"/"every" after the anchor: "8 flowers in each bouquet", "in each one".
  for (std::size_t k = anchor + 1; k < window_end && !found; ++k) {
    if (is_number_token(p, k)) break;
    const auto& w = p.tokens[k].text;
    if (w != "each" && w != "every") continue;
    if (auto d = noun_after_trigger(p, k, s.end)) {
      // "6 boxes and each box ..." describes the boxes, not a rate of 6.
      if (share_tokens(*d, unit.surface)) break;
      den = *d;
    } else if (auto b = noun_before(p, s.begin, anchor); b && !share_tokens(*b, unit.surface)) {
      den = *b;
    } else {
      den = {"each"};
    }
    found = true;
  }
  // "a"/"an" right after the unit: "60 miles an hour".
  if (!found && unit_end && *unit_end < s.end) {
    const auto& w = p.tokens[*unit_end].text;
    if (w == "a" || w == "an") {
      if (auto d = noun_after_trigger(p, *unit_end, s.end); d && !share_tokens(*d, unit.surface)) {
        den = *d;
        found = true;
      }
    }
  }
  // "Each student has 3 books."
  if (!found && allow_each_before) {
    for (std::size_t k = s.begin; k < anchor; ++k) {
      const auto& w = p.tokens[k].text;
      if (w != "each" && w != "every") continue;
      bool crosses_number = false;
      for (std::size_t j = k + 1; j < anchor; ++j) crosses_number |= is_number_token(p, j);
      if (crosses_number) continue;
      if (k + 1 < anchor && is_unit_noun(p, k + 1)) {
        auto d = noun_run(p, k + 1, anchor);
        if (!share_tokens(d, unit.surface)) {
          den = d;
          found = true;
          break;
        }
      }
    }
  }
  if (found) {
    unit.num = unit.surface;
    unit.den = std::move(den);
  }
}

QuantityUnit quantity_unit(const Problem& p, const Quantity& q) {
  QuantityUnit unit;
  const std::size_t t = q.span.begin;
  const Sentence s = sentence_of(p, t);
  std::optional<std::size_t> unit_end;
  if (t > 0 && p.tokens[t - 1].text == "$") {
    unit.surface = {"dollar"};
  } else if (auto after = noun_after(p, t + 1, std::min(s.end, t + 1 + kUnitWindow))) {
    unit.surface = std::move(after->first);
    unit_end = after->second;
  } else if (auto before = noun_before(p, s.begin, t)) {
    unit.surface = std::move(*before);
  }
  detect_rate(p, t, unit_end, s, true, unit);
  return unit;
}

QuantityUnit question_unit(const Problem& p) {
  QuantityUnit unit;
  const TokenRange qs = p.question;
  const Sentence s{qs.begin, qs.end};
  std::size_t anchor = qs.begin;
  std::size_t search_from = qs.begin;
  for (std::size_t k = qs.begin; k + 1 < qs.end; ++k) {
    if (p.tokens[k].text == "how" &&
        (p.tokens[k + 1].text == "many" || p.tokens[k + 1].text == "much")) {
      search_from = k + 2;
      anchor = k + 1;
      break;
    }
  }
  std::optional<std::size_t> unit_end;
  if (auto after = noun_after(p, search_from, qs.end)) {
    unit.surface = std::move(after->first);
    unit_end = after->second;
    anchor = after->second - 1;
  }
  detect_rate(p, anchor, unit_end, s, false, unit);
  return unit;
}

}  // namespace

Pos coarse_pos(std::string_view token) {
  if (token.empty()) return Pos::Other;
  if (std::isdigit(static_cast<unsigned char>(token.front()))) return Pos::Num;
  if (!std::isalpha(static_cast<unsigned char>(token.front()))) return Pos::Other;
  if (kNumberWords.count(token)) return Pos::Num;
  if (kOther.count(token)) return Pos::Other;
  if (kVerbs.count(token)) return Pos::Verb;
  if (kAdjectives.count(token)) return Pos::Adj;
  if (kSuffixNouns.count(token)) return Pos::Noun;
  if (token.size() > 4 && ends_with(token, "ing")) return Pos::Verb;
  if (token.size() > 3 && ends_with(token, "ed")) return Pos::Verb;
  if (token.size() > 3 && ends_with(token, "ly")) return Pos::Other;
  for (std::string_view suffix : {"ful", "ous", "ive", "able", "ible", "less"}) {
    if (token.size() > suffix.size() + 2 && ends_with(token, suffix)) return Pos::Adj;
  }
  return Pos::Noun;
}

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Num: return "NUM";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

std::string lemmatize(std::string_view word) {
  std::string current(word);
  for (;;) {
    std::string next = lemma_step(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

QuantityUnit extract_unit(const Problem& problem, int vertex) {
  if (vertex < 0 || vertex > problem.num_quantities()) {
    throw std::out_of_range("vertex " + std::to_string(vertex) + " out of range");
  }
  if (vertex == problem.question_vertex()) return question_unit(problem);
  return quantity_unit(problem, problem.quantities[static_cast<std::size_t>(vertex)]);
}

std::vector<QuantityUnit> extract_units(const Problem& problem) {
  std::vector<QuantityUnit> out;
  for (int v = 0; v <= problem.num_quantities(); ++v) out.push_back(extract_unit(problem, v));
  return out;
}

bool share_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

bool units_share_tokens(const QuantityUnit& a, const QuantityUnit& b) {
  return share_tokens(a.surface, b.surface);
}

}  // namespace unitdep
