#include "unitdep/learn.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "unitdep/annotate.h"
#include "unitdep/error.h"

namespace unitdep {

namespace {

constexpr int kWindow = 3;
constexpr char kSep = '\x1f';

std::string flag(bool b) { return b ? "1" : "0"; }

std::string pos_tag(const std::string& tok) {
  if (tok == "<s>" || tok == "</s>") return tok;
  return std::string(pos_name(coarse_pos(tok)));
}

// Window features around the token at `t`, bounded by its sentence.
FeatureVector window_features(const Problem& p, std::size_t t) {
  FeatureVector fv;
  const auto& toks = p.tokens;
  int sentence = toks[t].sentence;
  // seq holds (offset, token); boundary markers close a truncated window.
  std::vector<std::pair<int, std::string>> seq;
  for (int d = 1; d <= kWindow; ++d) {
    if (t < static_cast<std::size_t>(d) || toks[t - static_cast<std::size_t>(d)].sentence != sentence) {
      seq.emplace_back(-d, "<s>");
      break;
    }
    seq.emplace_back(-d, toks[t - static_cast<std::size_t>(d)].text);
  }
  std::reverse(seq.begin(), seq.end());
  seq.emplace_back(0, toks[t].text);
  for (int d = 1; d <= kWindow; ++d) {
    std::size_t k = t + static_cast<std::size_t>(d);
    if (k >= toks.size() || toks[k].sentence != sentence) {
      seq.emplace_back(d, "</s>");
      break;
    }
    seq.emplace_back(d, toks[k].text);
  }

  for (const auto& [d, w] : seq) {
    if (d == 0) continue;
    std::string side = d < 0 ? "L:" : "R:";
    std::string at = std::to_string(d);
    fv.add(side + w);
    fv.add("p" + at + "=" + pos_tag(w));
    if (d == -1 || d == 1) fv.add("w" + at + "=" + w);
  }
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    const auto& [d1, a] = seq[k];
    const auto& [d2, b] = seq[k + 1];
    fv.add("bi:" + a + " " + b);
    if (d1 == 0) fv.add("bi:<q> " + b);
    if (d2 == 0) fv.add("bi:" + a + " <q>");
    std::string pa = d1 == 0 ? "Q" : pos_tag(a);
    std::string pb = d2 == 0 ? "Q" : pos_tag(b);
    fv.add("pp:" + pa + "_" + pb);
    if (d1 != 0 && d2 != 0) {
      fv.add("wp:" + a + "_" + pb);
      fv.add("pw:" + pa + "_" + b);
    }
  }
  return fv;
}

FeatureVector question_features(const Problem& p) {
  FeatureVector fv;
  std::string prev = "<s>";
  for (std::size_t k = p.question.begin; k < p.question.end; ++k) {
    const auto& w = p.tokens[k].text;
    if (numeric_value(w)) {
      fv.add("qu:<num>");
    } else {
      fv.add("qu:" + w);
    }
    fv.add("qb:" + prev + " " + w);
    fv.add("qp:" + pos_tag(w));
    prev = w;
  }
  fv.add("qb:" + prev + " </s>");
  return fv;
}

bool share(const std::optional<std::vector<std::string>>& a, const std::vector<std::string>& b) {
  return a && share_tokens(*a, b);
}

void add_rule_vertex(FeatureVector& fv, const FeatureContext& ctx, int v, const std::string& pre) {
  const auto& u = ctx.unit(v);
  fv.add(pre + "rule_rate=" + flag(u.rule_rate()));
  if (u.surface.empty()) fv.add(pre + "rule_no_unit");
}

}  // namespace

void FeatureVector::add(const std::string& name, double value) { entries_[name] += value; }

void FeatureVector::add_all(const FeatureVector& other, const std::string& prefix) {
  for (const auto& [k, v] : other.entries_) entries_[prefix + k] += v;
}

double FeatureVector::get(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? 0.0 : it->second;
}

FeatureVector& FeatureVector::operator+=(const FeatureVector& other) {
  add_all(other);
  return *this;
}

FeatureContext::FeatureContext(const Problem& problem)
    : problem_(&problem), units_(extract_units(problem)) {
  for (const auto& q : problem.quantities) context_.push_back(window_features(problem, q.span.begin));
  context_.push_back(question_features(problem));
}

FeatureVector vertex_features(const FeatureContext& ctx, int vertex, FeatureFlags flags) {
  FeatureVector fv;
  int qv = ctx.problem().question_vertex();
  if (vertex < 0 || vertex > qv) throw std::out_of_range("vertex out of range");
  if (flags.context) fv.add_all(ctx.context(vertex));
  if (flags.rule) {
    add_rule_vertex(fv, ctx, vertex, "");
    if (vertex != qv) {
      const auto& u = ctx.unit(vertex);
      const auto& q = ctx.unit(qv);
      fv.add("rule_q_shared=" + flag(share_tokens(u.surface, q.surface)));
      if (u.rule_rate()) fv.add("rule_den_q=" + flag(share(u.den, q.surface)));
    }
  }
  return fv;
}

FeatureVector edge_features(const FeatureContext& ctx, int vi, int vj, FeatureFlags flags) {
  int qv = ctx.problem().question_vertex();
  if (vi < 0 || vj > qv || vi >= vj) throw std::invalid_argument("edge features need vi < vj");
  FeatureVector fv;
  bool question = vj == qv;
  fv.add(question ? "pair=question" : "pair=quantities");
  if (flags.context) {
    fv.add_all(ctx.context(vi), "i:");
    fv.add_all(ctx.context(vj), question ? "q:" : "j:");
  }
  if (flags.rule) {
    const auto& a = ctx.unit(vi);
    const auto& b = ctx.unit(vj);
    add_rule_vertex(fv, ctx, vi, "i:");
    add_rule_vertex(fv, ctx, vj, "j:");
    fv.add("rule_rates=" + flag(a.rule_rate()) + flag(b.rule_rate()));
    bool same = share_tokens(a.surface, b.surface);
    fv.add("shared_unit=" + flag(same));
    bool inj = share(a.num, b.surface), idj = share(a.den, b.surface);
    bool jni = share(b.num, a.surface), jdi = share(b.den, a.surface);
    fv.add("i_num~j=" + flag(inj));
    fv.add("i_den~j=" + flag(idj));
    fv.add("j_num~i=" + flag(jni));
    fv.add("j_den~i=" + flag(jdi));
    std::string shape = flag(a.rule_rate()) + flag(b.rule_rate()) + flag(same) + flag(inj) +
                        flag(idj) + flag(jni) + flag(jdi);
    fv.add(std::string(question ? "q" : "p") + "shape=" + shape);
  }
  return fv;
}

FeatureVector relevance_features(const FeatureContext& ctx, int quantity) {
  FeatureVector fv;
  fv.add("bias");
  fv.add_all(ctx.context(quantity));
  int n = ctx.problem().num_quantities();
  if (quantity == 0) fv.add("first");
  if (quantity == n - 1) fv.add("last");
  return fv;
}

FeatureVector lca_features(const FeatureContext& ctx, int qi, int qj) {
  const auto& p = ctx.problem();
  if (qi < 0 || qj >= p.num_quantities() || qi >= qj)
    throw std::invalid_argument("LCA features need qi < qj");
  FeatureVector fv;
  fv.add("bias");
  fv.add_all(ctx.context(qi), "i:");
  fv.add_all(ctx.context(qj), "j:");
  fv.add_all(ctx.context(p.question_vertex()), "q:");
  const auto& a = p.quantities[static_cast<std::size_t>(qi)];
  const auto& b = p.quantities[static_cast<std::size_t>(qj)];
  fv.add(std::string("cmp=") + (a.value > b.value ? "gt" : a.value < b.value ? "lt" : "eq"));
  bool same_sentence =
      p.tokens[a.span.begin].sentence == p.tokens[b.span.begin].sentence;
  fv.add("same_sentence=" + flag(same_sentence));
  return fv;
}

const std::vector<std::string>& edge_labels() {
  static const std::vector<std::string> l = [] {
    std::vector<std::string> out;
    for (auto t : kAllEdgeTypes) out.emplace_back(edge_name(t));
    return out;
  }();
  return l;
}

const std::vector<std::string>& lca_labels() {
  static const std::vector<std::string> l = [] {
    std::vector<std::string> out;
    for (auto op : kAllOps) out.emplace_back(op_symbol(op));
    return out;
  }();
  return l;
}

LinearModel::LinearModel(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("a model needs at least one label");
}

int LinearModel::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  throw std::invalid_argument("unknown label '" + std::string(label) + "'");
}

double LinearModel::score(const FeatureVector& fv, int label) const {
  if (label < 0 || static_cast<std::size_t>(label) >= labels_.size())
    throw std::invalid_argument("label index out of range");
  double s = 0;
  for (const auto& [name, value] : fv.entries()) {
    auto it = weights_.find(name);
    if (it != weights_.end()) s += value * it->second[static_cast<std::size_t>(label)];
  }
  return s;
}

double LinearModel::score(const FeatureVector& fv, std::string_view label) const {
  return score(fv, label_index(label));
}

std::vector<double> LinearModel::scores(const FeatureVector& fv) const {
  std::vector<double> out(labels_.size(), 0.0);
  for (const auto& [name, value] : fv.entries()) {
    auto it = weights_.find(name);
    if (it == weights_.end()) continue;
    for (std::size_t l = 0; l < out.size(); ++l) out[l] += value * it->second[l];
  }
  return out;
}

int LinearModel::predict(const FeatureVector& fv) const {
  auto s = scores(fv);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

double LinearModel::weight(std::string_view label, const std::string& feature) const {
  auto it = weights_.find(feature);
  if (it == weights_.end()) return 0.0;
  return it->second[static_cast<std::size_t>(label_index(label))];
}

void LinearModel::set_weight(std::string_view label, const std::string& feature, double w) {
  auto l = static_cast<std::size_t>(label_index(label));
  auto& row = weights_[feature];
  row.resize(labels_.size(), 0.0);
  row[l] = w;
}

void LinearModel::train(const std::vector<Example>& examples, const TrainOptions& options) {
  if (examples.empty()) throw std::invalid_argument("no training examples");
  if (options.epochs < 1) throw std::invalid_argument("epochs must be positive");
  std::size_t k = labels_.size();

  // Intern feature names; weights live in flat arrays during training.
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::pair<std::size_t, double>>> data;
  data.reserve(examples.size());
  for (const auto& ex : examples) {
    if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= k)
      throw std::invalid_argument("example label out of range");
    std::vector<std::pair<std::size_t, double>> row;
    for (const auto& [name, value] : ex.features.entries()) {
      auto [it, fresh] = index.emplace(name, index.size());
      row.emplace_back(it->second, value);
    }
    data.push_back(std::move(row));
  }
  std::vector<double> w(index.size() * k, 0.0), u(index.size() * k, 0.0);
  double c = 1;

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> s(k);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (std::size_t e : order) {
      std::fill(s.begin(), s.end(), 0.0);
      for (auto [f, v] : data[e])
        for (std::size_t l = 0; l < k; ++l) s[l] += v * w[f * k + l];
      auto gold = static_cast<std::size_t>(examples[e].label);
      std::size_t rival = gold == 0 ? 1 : 0;
      for (std::size_t l = 0; l < k; ++l)
        if (l != gold && s[l] > s[rival]) rival = l;
      if (k > 1 && s[gold] - s[rival] < 1.0) {
        for (auto [f, v] : data[e]) {
          w[f * k + gold] += v;
          w[f * k + rival] -= v;
          u[f * k + gold] += c * v;
          u[f * k + rival] -= c * v;
        }
      }
      c += 1;
    }
  }

  weights_.clear();
  for (const auto& [name, f] : index) {
    std::vector<double> row(k);
    bool nonzero = false;
    for (std::size_t l = 0; l < k; ++l) {
      row[l] = w[f * k + l] - u[f * k + l] / c;
      nonzero = nonzero || row[l] != 0.0;
    }
    if (nonzero) weights_.emplace(name, std::move(row));
  }
  options_ = options;
}

nlohmann::json LinearModel::to_json() const {
  // Sorted keys keep the file byte-stable.
  std::map<std::string, double> flat;
  for (const auto& [feature, row] : weights_)
    for (std::size_t l = 0; l < row.size(); ++l)
      if (row[l] != 0.0) flat[labels_[l] + kSep + feature] = row[l];
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [key, w] : flat) weights[key] = w;
  return {{"labels", labels_},
          {"epochs", options_.epochs},
          {"seed", options_.seed},
          {"weights", weights}};
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  LinearModel m(j.at("labels").get<std::vector<std::string>>());
  m.options_.epochs = j.value("epochs", 10);
  m.options_.seed = j.value("seed", std::uint64_t{1});
  for (const auto& [key, w] : j.at("weights").items()) {
    auto cut = key.find(kSep);
    if (cut == std::string::npos) throw DataError("weight key without separator: " + key);
    m.set_weight(key.substr(0, cut), key.substr(cut + 1), w.get<double>());
  }
  return m;
}

nlohmann::json ClassifierSuite::to_json() const {
  return {{"format", "unitdep-suite"},
          {"flags", {{"rule", flags.rule}, {"context", flags.context}}},
          {"vertex", vertex.to_json()},
          {"edge", edge.to_json()},
          {"irrelevance", irrelevance.to_json()},
          {"lca", lca.to_json()}};
}

ClassifierSuite ClassifierSuite::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "unitdep-suite") throw DataError("not a classifier suite");
  ClassifierSuite s;
  s.flags.rule = j.at("flags").at("rule").get<bool>();
  s.flags.context = j.at("flags").at("context").get<bool>();
  s.vertex = LinearModel::from_json(j.at("vertex"));
  s.edge = LinearModel::from_json(j.at("edge"));
  s.irrelevance = LinearModel::from_json(j.at("irrelevance"));
  s.lca = LinearModel::from_json(j.at("lca"));
  if (s.vertex.labels() != vertex_labels() || s.edge.labels() != edge_labels() ||
      s.irrelevance.labels() != relevance_labels() || s.lca.labels() != lca_labels())
    throw DataError("classifier suite has unexpected label sets");
  return s;
}

void ClassifierSuite::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << to_json().dump(1) << "\n";
}

ClassifierSuite ClassifierSuite::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
}

ClassifierSuite train_suite(const std::vector<Problem>& problems, FeatureFlags flags,
                            const TrainOptions& options) {
  std::vector<Example> vertex, edge, relevance, lca;
  for (const auto& p : problems) {
    auto gold = derive_gold(p);
    const auto& tree = *p.gold->tree;
    FeatureContext ctx(p);
    int n = p.num_quantities();
    for (int v = 0; v <= n; ++v)
      vertex.push_back({vertex_features(ctx, v, flags), static_cast<int>(gold.graph.vertex(v))});
    for_each_pair(n + 1, [&](int i, int j) {
      edge.push_back({edge_features(ctx, i, j, flags), static_cast<int>(gold.graph.edge(i, j))});
    });
    for (int q = 0; q < n; ++q) relevance.push_back({relevance_features(ctx, q), tree.uses(q) ? 0 : 1});
    const auto& used = tree.quantities();
    for (std::size_t a = 0; a < used.size(); ++a)
      for (std::size_t b = a + 1; b < used.size(); ++b)
        lca.push_back({lca_features(ctx, used[a], used[b]),
                       static_cast<int>(op_lca(tree, used[a], used[b]))});
  }
  ClassifierSuite suite;
  suite.flags = flags;
  if (vertex.empty()) throw std::invalid_argument("no training problems");
  suite.vertex.train(vertex, options);
  suite.edge.train(edge, options);
  suite.irrelevance.train(relevance, options);
  // A corpus of single-quantity problems has no pairs to learn from.
  if (!lca.empty()) suite.lca.train(lca, options);
  return suite;
}

}  // namespace unitdep
