#include "unitdep/synth.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

namespace unitdep {

namespace {

struct Noun {
  const char* plural;
  const char* singular;
};

struct Person {
  const char* name;
  const char* subject;  // he / she
  const char* object;   // him / her
  const char* possessive;
};

struct Vocabulary {
  std::vector<Noun> items;
  std::vector<Noun> containers;
  std::vector<Person> people;
};

const std::array<Vocabulary, 2>& vocabularies() {
  static const std::array<Vocabulary, 2> v = {{
      {{{"apples", "apple"}, {"plums", "plum"}, {"pears", "pear"}, {"marbles", "marble"},
        {"stickers", "sticker"}, {"pencils", "pencil"}, {"cards", "card"}, {"shells", "shell"},
        {"stamps", "stamp"}, {"beads", "bead"}, {"candles", "candle"}, {"buttons", "button"}},
       {{"boxes", "box"}, {"bags", "bag"}, {"jars", "jar"}, {"baskets", "basket"},
        {"crates", "crate"}, {"trays", "tray"}},
       {{"Tom", "he", "him", "his"}, {"Sara", "she", "her", "her"},
        {"Mike", "he", "him", "his"}, {"Lisa", "she", "her", "her"},
        {"Ben", "he", "him", "his"}, {"Anna", "she", "her", "her"},
        {"Jake", "he", "him", "his"}, {"Emma", "she", "her", "her"}}},
      {{{"cookies", "cookie"}, {"cupcakes", "cupcake"}, {"muffins", "muffin"},
        {"crayons", "crayon"}, {"rocks", "rock"}, {"coins", "coin"}, {"tickets", "ticket"},
        {"balloons", "balloon"}, {"blocks", "block"}, {"feathers", "feather"},
        {"keys", "key"}, {"bottles", "bottle"}},
       {{"cases", "case"}, {"buckets", "bucket"}, {"bins", "bin"}, {"cartons", "carton"},
        {"tins", "tin"}, {"sacks", "sack"}},
       {{"Omar", "he", "him", "his"}, {"Nina", "she", "her", "her"},
        {"Leo", "he", "him", "his"}, {"Ivy", "she", "her", "her"},
        {"Max", "he", "him", "his"}, {"Ruby", "she", "her", "her"},
        {"Owen", "he", "him", "his"}, {"Grace", "she", "her", "her"}}},
  }};
  return v;
}

std::string cap(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// One generated record before parsing.
struct Draft {
  std::string family;
  std::string text;
  std::string tree;  // "#i" leaves
  std::set<int> rates;
};

class Generator {
 public:
  Generator(std::uint64_t seed, const Vocabulary& vocab) : rng_(seed), v_(vocab) {}

  int num(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  template <typename T>
  const T& pick(const std::vector<T>& xs) { return xs[rng_() % xs.size()]; }
  bool coin() { return rng_() % 2 == 0; }

  const Noun& item() { return pick(v_.items); }
  // An item different from `other`.
  const Noun& item_except(const Noun& other) {
    while (true) {
      const auto& n = item();
      if (&n != &other) return n;
    }
  }
  const Noun& container() { return pick(v_.containers); }
  const Person& person() { return pick(v_.people); }
  const Person& person_except(const Person& other) {
    while (true) {
      const auto& p = person();
      if (&p != &other) return p;
    }
  }

  // k distinct integers in [lo, hi].
  std::vector<int> distinct(std::size_t k, int lo, int hi) {
    std::vector<int> out;
    while (out.size() < k) {
      int x = num(lo, hi);
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
  }

  std::mt19937_64 rng_;
  const Vocabulary& v_;
};

using S = std::string;
std::string n2s(int x) { return std::to_string(x); }

Draft add_sub_two(Generator& g) {
  const auto& a = g.person();
  const auto& b = g.person_except(a);
  const auto& x = g.item();
  auto v = g.distinct(2, 2, 60);
  int hi = std::max(v[0], v[1]), lo = std::min(v[0], v[1]);
  S X = x.plural;
  switch (g.num(0, 5)) {
    case 0:
      return {"addsub", S(a.name) + " had " + n2s(v[0]) + " " + X + ". " + b.name + " gave " +
                            a.object + " " + n2s(v[1]) + " more " + X + ". How many " + X +
                            " does " + a.name + " have now?",
              "(+ #0 #1)", {}};
    case 1:
      return {"addsub", S(a.name) + " had " + n2s(hi) + " " + X + ". " + cap(a.subject) +
                            " gave " + n2s(lo) + " " + X + " to " + b.name + ". How many " + X +
                            " does " + a.name + " have left?",
              "(- #0 #1)", {}};
    case 2:
      return {"addsub", S(a.name) + " found " + n2s(v[0]) + " " + X + " on Monday and " +
                            n2s(v[1]) + " " + X + " on Tuesday. How many " + X + " did " +
                            a.subject + " find in total?",
              "(+ #0 #1)", {}};
    case 3: {
      const auto& c = g.container();
      return {"addsub", "There were " + n2s(hi) + " " + X + " in the " + c.singular + ". " +
                            a.name + " took " + n2s(lo) + " " + X + " out of the " + c.singular +
                            ". How many " + X + " are in the " + c.singular + " now?",
              "(- #0 #1)", {}};
    }
    case 4:
      return {"addsub", S(a.name) + " has " + n2s(v[0]) + " " + X + ". " + b.name + " has " +
                            n2s(v[1]) + " " + X + ". How many " + X + " do they have altogether?",
              "(+ #0 #1)", {}};
    default:
      return {"addsub", S(a.name) + " had " + n2s(hi) + " " + X + ". " + cap(a.subject) +
                            " lost " + n2s(lo) + " of them. How many " + X + " does " +
                            a.subject + " have now?",
              "(- #0 #1)", {}};
  }
}

Draft compare(Generator& g) {
  const auto& a = g.person();
  const auto& b = g.person_except(a);
  const auto& x = g.item();
  auto v = g.distinct(2, 2, 60);
  int hi = std::max(v[0], v[1]), lo = std::min(v[0], v[1]);
  S X = x.plural;
  switch (g.num(0, 2)) {
    case 0:
      return {"compare", S(a.name) + " has " + n2s(hi) + " " + X + ". " + b.name + " has " +
                             n2s(lo) + " " + X + ". How many more " + X + " does " + a.name +
                             " have than " + b.name + "?",
              "(- #0 #1)", {}};
    case 1:
      return {"compare", S(a.name) + " has " + n2s(lo) + " " + X + ". " + b.name + " has " +
                             n2s(hi) + " " + X + ". How many fewer " + X + " does " + a.name +
                             " have than " + b.name + "?",
              "(- #1 #0)", {}};
    default:
      return {"compare", S(a.name) + " has " + n2s(v[0]) + " " + X + ". " + b.name + " has " +
                             n2s(v[1]) + " more " + X + " than " + a.name + ". How many " + X +
                             " does " + b.name + " have?",
              "(+ #0 #1)", {}};
  }
}

Draft add_sub_three(Generator& g) {
  const auto& a = g.person();
  const auto& b = g.person_except(a);
  const auto& x = g.item();
  S X = x.plural;
  switch (g.num(0, 3)) {
    case 0: {
      auto v = g.distinct(3, 2, 40);
      return {"addsub", S(a.name) + " picked " + n2s(v[0]) + " " + X + " in the morning, " +
                            n2s(v[1]) + " " + X + " at noon and " + n2s(v[2]) + " " + X +
                            " in the evening. How many " + X + " did " + a.subject +
                            " pick?",
              "(+ (+ #0 #1) #2)", {}};
    }
    case 1: {
      auto v = g.distinct(3, 2, 30);
      int start = v[1] + v[2] + g.num(5, 40);
      return {"addsub", S(a.name) + " had " + n2s(start) + " " + X + ". " + cap(a.subject) +
                            " lost " + n2s(v[1]) + " " + X + " and gave " + n2s(v[2]) + " " + X +
                            " to " + b.name + ". How many " + X + " does " + a.subject +
                            " have left?",
              "(- (- #0 #1) #2)", {}};
    }
    case 2: {
      auto v = g.distinct(3, 2, 30);
      int give = std::min(v[0] + v[1] - 1, v[2] + 2);
      return {"addsub", S(a.name) + " had " + n2s(v[0]) + " " + X + ". " + cap(a.subject) +
                            " bought " + n2s(v[1]) + " more " + X + " and then gave " +
                            n2s(give) + " " + X + " to " + b.name + ". How many " + X +
                            " does " + a.name + " have now?",
              "(- (+ #0 #1) #2)", {}};
    }
    default: {
      const auto& c = g.person_except(a);
      auto v = g.distinct(3, 2, 40);
      return {"addsub", S(a.name) + " has " + n2s(v[0]) + " " + X + ", " + b.name + " has " +
                            n2s(v[1]) + " " + X + " and " + c.name + " has " + n2s(v[2]) + " " +
                            X + ". How many " + X + " do they have in all?",
              "(+ (+ #0 #1) #2)", {}};
    }
  }
}

Draft add_sub_four(Generator& g) {
  const auto& a = g.person();
  const auto& x = g.item();
  S X = x.plural;
  if (g.coin()) {
    auto v = g.distinct(4, 2, 30);
    return {"addsub", S(a.name) + " collected " + n2s(v[0]) + " " + X + " on Monday, " +
                          n2s(v[1]) + " " + X + " on Tuesday, " + n2s(v[2]) + " " + X +
                          " on Wednesday and " + n2s(v[3]) + " " + X +
                          " on Thursday. How many " + X + " did " + a.subject + " collect?",
            "(+ (+ (+ #0 #1) #2) #3)", {}};
  }
  const auto& b = g.person_except(a);
  const auto& c = g.person_except(a);
  auto v = g.distinct(4, 2, 30);
  int lost = std::min(v[3], v[0] + v[1] + v[2] - 1);
  return {"addsub", S(a.name) + " had " + n2s(v[0]) + " " + X + ". " + cap(a.subject) + " got " +
                        n2s(v[1]) + " more " + X + " from " + b.name + " and " + n2s(v[2]) +
                        " " + X + " from " + c.name + ". Then " + a.subject + " lost " +
                        n2s(lost) + " " + X + ". How many " + X + " does " + a.name +
                        " have now?",
          "(- (+ (+ #0 #1) #2) #3)", {}};
}

Draft rate_times_count(Generator& g) {
  const auto& a = g.person();
  const auto& x = g.item();
  const auto& c = g.container();
  auto v = g.distinct(2, 2, 12);
  int r = v[0], k = v[1];
  S X = x.plural;
  switch (g.num(0, 4)) {
    case 0:
      return {"rate", S("Each ") + c.singular + " has " + n2s(r) + " " + X + ". " + a.name +
                          " has " + n2s(k) + " " + c.plural + ". How many " + X + " does " +
                          a.name + " have?",
              "(* #0 #1)", {0}};
    case 1:
      return {"rate", S(a.name) + " has " + n2s(k) + " " + c.plural + ". There are " + n2s(r) +
                          " " + X + " in each " + c.singular + ". How many " + X +
                          " are there in all?",
              "(* #0 #1)", {1}};
    case 2:
      return {"rate", S(a.name) + " bought " + n2s(k) + " " + c.plural + " of " + X + ". Each " +
                          c.singular + " had " + n2s(r) + " " + X + ". How many " + X + " did " +
                          a.subject + " buy?",
              "(* #0 #1)", {1}};
    case 3:
      return {"rate", S(a.name) + " earns " + n2s(r) + " dollars per hour. How many dollars does " +
                          a.subject + " earn in " + n2s(k) + " hours?",
              "(* #0 #1)", {0}};
    default:
      return {"rate", S(a.name) + " packs " + n2s(r) + " " + X + " in every " + c.singular +
                          ". How many " + X + " does " + a.subject + " pack in " + n2s(k) + " " +
                          c.plural + "?",
              "(* #0 #1)", {0}};
  }
}

Draft total_over_rate(Generator& g) {
  const auto& a = g.person();
  const auto& x = g.item();
  const auto& c = g.container();
  auto v = g.distinct(2, 2, 12);
  int r = v[0], k = v[1], t = r * k;
  S X = x.plural;
  switch (g.num(0, 3)) {
    case 0:
      return {"rate", S(a.name) + " has " + n2s(t) + " " + X + ". " + cap(a.subject) + " puts " +
                          n2s(r) + " " + X + " in each " + c.singular + ". How many " + c.plural +
                          " does " + a.subject + " need?",
              "(/ #0 #1)", {1}};
    case 1:
      return {"rate", S(a.name) + " has " + n2s(t) + " " + X + " to pack. Each " + c.singular +
                          " holds " + n2s(r) + " " + X + ". How many " + c.plural + " can " +
                          a.subject + " fill?",
              "(/ #0 #1)", {1}};
    case 2:
      return {"rate", S(a.name) + " drove " + n2s(t) + " miles at " + n2s(r) +
                          " miles per hour. How many hours did " + a.subject + " drive?",
              "(/ #0 #1)", {1}};
    default:
      return {"rate", S(a.name) + " wants to share " + n2s(t) + " " + X + " so that every friend gets " +
                          n2s(r) + " " + X + ". How many friends can get " + X + "?",
              "(/ #0 #1)", {1}};
  }
}

Draft grouped(Generator& g) {
  const auto& a = g.person();
  const auto& x = g.item();
  const auto& c = g.container();
  S X = x.plural;
  switch (g.num(0, 2)) {
    case 0: {
      auto v = g.distinct(2, 2, 12);
      int r = v[0], k = v[1];
      int lost = g.num(2, 20);
      while (lost == r || lost == k || lost == r * k + lost) lost = g.num(2, 20);
      return {"grouped", S(a.name) + " picked " + n2s(r * k + lost) + " " + X + ". " +
                             cap(a.subject) + " was making " + c.plural + " with " + n2s(r) +
                             " " + X + " in each one. If " + n2s(lost) + " of the " + X +
                             " were lost, how many " + c.plural + " could " + a.subject +
                             " still make?",
              "(/ (- #0 #2) #1)", {1}};
    }
    case 1: {
      auto v = g.distinct(2, 2, 12);
      int r = v[0], k = v[1];
      int more = g.num(2, r * k - 1);
      while (more == r || more == r * k - more) more = g.num(2, r * k - 1);
      return {"grouped", S(a.name) + " had " + n2s(r * k - more) + " " + X + " and bought " +
                             n2s(more) + " more. " + cap(a.subject) + " puts " + n2s(r) + " " + X +
                             " in each " + c.singular + ". How many " + c.plural + " can " +
                             a.subject + " fill?",
              "(/ (+ #0 #1) #2)", {2}};
    }
    default: {
      auto v = g.distinct(3, 2, 12);
      return {"grouped", S("Each ") + c.singular + " holds " + n2s(v[0]) + " " + X + ". " +
                             a.name + " has " + n2s(v[1]) + " red " + c.plural + " and " +
                             n2s(v[2]) + " blue " + c.plural + ". How many " + X + " does " +
                             a.subject + " have?",
              "(* #0 (+ #1 #2))", {0}};
    }
  }
}

Draft distractor(Generator& g) {
  const auto& a = g.person();
  const auto& b = g.person_except(a);
  const auto& x = g.item();
  const auto& y = g.item_except(x);
  bool first = g.coin();
  const auto& z = first ? x : y;
  switch (g.num(0, 4)) {
    case 0:
    case 1: {
      auto v = g.distinct(3, 2, 30);
      int give = std::min(v[2], std::min(v[0], v[1]) - 1);
      if (give < 2 || give == v[0] || give == v[1]) {
        v = {20 + g.num(0, 9), 31 + g.num(0, 9), g.num(2, 9)};
        give = v[2];
      }
      return {"distractor", S(a.name) + " picked " + n2s(v[0]) + " " + x.plural + " and " +
                                n2s(v[1]) + " " + y.plural + " from the garden. " +
                                cap(a.subject) + " gave " + n2s(give) + " " + z.plural + " to " +
                                b.name + ". How many " + z.plural + " does " + a.subject +
                                " have now?",
              first ? "(- #0 #2)" : "(- #1 #2)", {}};
    }
    case 2:
    case 3: {
      auto v = g.distinct(3, 2, 30);
      return {"distractor", S(a.name) + " has " + n2s(v[0]) + " " + x.plural + " and " +
                                n2s(v[1]) + " " + y.plural + ". " + cap(a.subject) + " bought " +
                                n2s(v[2]) + " more " + z.plural + ". How many " + z.plural +
                                " does " + a.subject + " have now?",
              first ? "(+ #0 #2)" : "(+ #1 #2)", {}};
    }
    default: {
      const auto& c = g.container();
      auto v = g.distinct(3, 2, 12);
      return {"distractor", S("Each ") + c.singular + " has " + n2s(v[0]) + " " + x.plural +
                                ". " + a.name + " has " + n2s(v[1]) + " " + c.plural + " and " +
                                n2s(v[2]) + " " + y.plural + ". How many " + x.plural +
                                " are in the " + c.plural + "?",
              "(* #0 #1)", {0}};
    }
  }
}

Draft rate_question(Generator& g) {
  const auto& a = g.person();
  const auto& x = g.item();
  auto v = g.distinct(2, 2, 12);
  int r = v[0], k = v[1], t = r * k;
  switch (g.num(0, 2)) {
    case 0:
      return {"ratequestion", S(a.name) + " drove " + n2s(t) + " miles in " + n2s(k) +
                                  " hours. How many miles per hour did " + a.subject + " drive?",
              "(/ #0 #1)", {2}};
    case 1:
      return {"ratequestion", S(a.name) + " read " + n2s(t) + " pages in " + n2s(k) +
                                  " days. How many pages did " + a.subject + " read per day?",
              "(/ #0 #1)", {2}};
    default:
      return {"ratequestion", S(a.name) + " paid " + n2s(t) + " dollars for " + n2s(k) + " " +
                                  x.plural + ". How many dollars did each " + x.singular +
                                  " cost?",
              "(/ #0 #1)", {2}};
  }
}

struct Family {
  int weight;
  Draft (*make)(Generator&);
};

const std::vector<Family>& families() {
  static const std::vector<Family> f = {
      {12, add_sub_two},      {8, compare},          {16, add_sub_three},
      {24, add_sub_four},     {12, rate_times_count}, {8, total_over_rate},
      {6, grouped},           {10, distractor},      {5, rate_question},
  };
  return f;
}

}  // namespace

std::vector<Problem> generate_corpus(std::uint64_t seed, std::size_t size) {
  if (size < 50) throw std::invalid_argument("synthetic corpus needs at least 50 problems");
  int total = 0;
  for (const auto& f : families()) total += f.weight;
  std::mt19937_64 chooser(seed);
  std::array<Generator, 2> gens = {Generator(seed * 2 + 1, vocabularies()[0]),
                                   Generator(seed * 2 + 2, vocabularies()[1])};
  std::vector<Problem> out;
  std::set<std::string> texts;
  while (out.size() < size) {
    auto& g = gens[out.size() % 2];
    int r = static_cast<int>(chooser() % static_cast<std::uint64_t>(total));
    const Family* fam = &families().front();
    for (const auto& f : families()) {
      if (r < f.weight) {
        fam = &f;
        break;
      }
      r -= f.weight;
    }
    Draft d = fam->make(g);
    if (!texts.insert(d.text).second) continue;  // identical text drawn twice
    char id[64];
    std::snprintf(id, sizeof id, "%s-%04zu", d.family.c_str(), out.size());
    Problem p = make_problem(id, d.text);
    GoldAnnotation gold;
    gold.tree = canonicalize(parse_indexed_prefix(d.tree));
    gold.answer = evaluate(*gold.tree, p.values());
    if (gold.answer <= 0) throw std::logic_error("generated non-positive answer for " + p.id);
    gold.rates = d.rates;
    p.gold = gold;
    out.push_back(std::move(p));
  }
  return out;
}

std::string problem_family(const Problem& problem) {
  auto cut = problem.id.rfind('-');
  return cut == std::string::npos ? problem.id : problem.id.substr(0, cut);
}

bool in_distractor_rate_subset(const Problem& problem) {
  if (!problem.gold || !problem.gold->tree) return false;
  if (problem.gold->tree->quantities().size() <
      static_cast<std::size_t>(problem.num_quantities()))
    return true;
  return problem.gold->rates && !problem.gold->rates->empty();
}

}  // namespace unitdep
