#include "unitdep/problem.h"

#include <fstream>

#include "unitdep/error.h"

namespace unitdep {

std::vector<Rational> Problem::values() const {
  std::vector<Rational> out;
  out.reserve(quantities.size());
  for (const auto& q : quantities) out.push_back(q.value);
  return out;
}

ExprTree Problem::parse_tree(std::string_view prefix) const {
  std::vector<bool> taken(quantities.size(), false);
  auto resolve = [&](std::string_view token) -> int {
    int index = -1;
    if (!token.empty() && token[0] == '#') {
      index = std::stoi(std::string(token.substr(1)));
      if (index < 0 || index >= num_quantities()) {
        throw std::invalid_argument("leaf " + std::string(token) + " out of range");
      }
    } else {
      auto numeric = numeric_value(token);
      Rational v = numeric ? *numeric : parse_rational(token);
      for (const auto& q : quantities) {
        if (!taken[static_cast<std::size_t>(q.index)] && q.value == v) {
          index = q.index;
          break;
        }
      }
      if (index < 0) {
        throw std::invalid_argument("leaf " + std::string(token) +
                                    " matches no unused quantity");
      }
    }
    taken[static_cast<std::size_t>(index)] = true;
    return index;
  };
  return parse_prefix(prefix, resolve);
}

std::string Problem::format_tree(const ExprTree& tree) const {
  std::vector<bool> taken(quantities.size(), false);
  return tree.to_prefix([&](int q) {
    const auto& mine = quantities.at(static_cast<std::size_t>(q));
    int would_pick = -1;
    for (const auto& other : quantities) {
      if (!taken[static_cast<std::size_t>(other.index)] && other.value == mine.value) {
        would_pick = other.index;
        break;
      }
    }
    taken[static_cast<std::size_t>(q)] = true;
    return would_pick == q ? mine.surface : "#" + std::to_string(q);
  });
}

std::vector<Quantity> extract_quantities(std::string_view text) {
  std::vector<Quantity> out;
  auto tokens = tokenize(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (auto v = numeric_value(tokens[i].text)) {
      out.push_back({static_cast<int>(out.size()), *v, {i, i + 1}, tokens[i].text});
    }
  }
  return out;
}

namespace {

TokenRange locate_question(const std::vector<Token>& tokens) {
  const int last = tokens.back().sentence;
  // A trailing sentence made only of punctuation does not count.
  int sentence = last;
  std::size_t begin = tokens.size();
  while (begin > 0 && tokens[begin - 1].sentence == sentence) --begin;
  std::size_t end = tokens.size();
  std::size_t start = begin;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& t = tokens[i].text;
    if (t == "how" || t == "what" || t == "find") {
      start = i;
      break;
    }
  }
  return {start, end};
}

}  // namespace

Problem make_problem(std::string id, std::string text) {
  Problem p;
  p.id = std::move(id);
  p.text = std::move(text);
  p.tokens = tokenize(p.text);
  if (p.tokens.empty()) throw DataError("problem '" + p.id + "' has no tokens");
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    if (auto v = numeric_value(p.tokens[i].text)) {
      p.quantities.push_back(
          {static_cast<int>(p.quantities.size()), *v, {i, i + 1}, p.tokens[i].text});
    }
  }
  // Quantity tokens keep their original spelling (tokens are lowercased,
  // which never affects digits).
  p.question = locate_question(p.tokens);
  return p;
}

Problem problem_from_json(const nlohmann::json& record) {
  if (!record.is_object()) throw DataError("record is not a JSON object");
  auto get_string = [&](const char* key) -> std::string {
    auto it = record.find(key);
    if (it == record.end()) throw DataError(std::string("missing field '") + key + "'");
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number()) return it->dump();
    throw DataError(std::string("field '") + key + "' must be a string");
  };
  Problem p = make_problem(get_string("id"), get_string("text"));
  if (!record.contains("answer")) return p;

  GoldAnnotation gold;
  try {
    gold.answer = parse_rational(get_string("answer"));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("bad answer: ") + e.what());
  }
  if (auto it = record.find("tree"); it != record.end() && !it->is_null()) {
    try {
      gold.tree = canonicalize(p.parse_tree(it->get<std::string>()));
    } catch (const std::exception& e) {
      throw DataError("problem '" + p.id + "': bad tree: " + e.what());
    }
    Rational value;
    try {
      value = evaluate(*gold.tree, p.values());
    } catch (const EvalError& e) {
      throw DataError("problem '" + p.id + "': " + e.what());
    }
    if (value != gold.answer) {
      throw DataError("problem '" + p.id + "': tree evaluates to " + format_rational(value) +
                      " but answer is " + format_rational(gold.answer));
    }
  }
  if (auto it = record.find("rates"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw DataError("problem '" + p.id + "': 'rates' must be a list");
    std::set<int> rates;
    for (const auto& r : *it) {
      if (r.is_string() && r.get<std::string>() == "question") {
        rates.insert(p.question_vertex());
      } else if (r.is_number_integer() && r.get<int>() >= 0 &&
                 r.get<int>() < p.num_quantities()) {
        rates.insert(r.get<int>());
      } else {
        throw DataError("problem '" + p.id + "': bad rate entry " + r.dump());
      }
    }
    gold.rates = std::move(rates);
  }
  p.gold = std::move(gold);
  return p;
}

nlohmann::json problem_to_json(const Problem& p) {
  nlohmann::json j;
  j["id"] = p.id;
  j["text"] = p.text;
  if (p.gold) {
    j["answer"] = format_rational(p.gold->answer);
    if (p.gold->tree) j["tree"] = p.format_tree(*p.gold->tree);
    if (p.gold->rates) {
      auto rates = nlohmann::json::array();
      for (int v : *p.gold->rates) {
        if (v == p.question_vertex()) rates.push_back("question"); else rates.push_back(v);
      }
      j["rates"] = rates;
    }
  }
  return j;
}

std::vector<Problem> read_problems(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<Problem> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(problem_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_problems(const std::string& path, const std::vector<Problem>& problems) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& p : problems) out << problem_to_json(p).dump() << '\n';
}

}  // namespace unitdep
