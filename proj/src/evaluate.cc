#include "unitdep/evaluate.h"

#include <cstdio>
#include <stdexcept>

#include "unitdep/annotate.h"
#include "unitdep/corpus.h"
#include "unitdep/synth.h"

namespace unitdep {

double SystemResult::accuracy() const {
  if (fold_accuracy.empty()) return 0;
  double sum = 0;
  for (double a : fold_accuracy) sum += a;
  return sum / static_cast<double>(fold_accuracy.size());
}

double SystemResult::subset_accuracy() const {
  return subset_total ? static_cast<double>(subset_correct) / static_cast<double>(subset_total) : 0;
}

namespace {

double ratio(std::size_t a, std::size_t b) {
  return b ? static_cast<double>(a) / static_cast<double>(b) : 0;
}

}  // namespace

double ClassifierResult::vertex_accuracy() const { return ratio(vertex_correct, vertex_total); }
double ClassifierResult::edge_accuracy() const { return ratio(edge_correct, edge_total); }
double ClassifierResult::udg_accuracy() const { return ratio(udg_exact, udg_total); }

const SystemResult& EvalReport::system(std::string_view name) const {
  for (const auto& s : systems)
    if (s.name == name) return s;
  throw std::out_of_range("no system named " + std::string(name));
}

const ClassifierResult& EvalReport::classifier(std::string_view name) const {
  for (const auto& c : classifiers)
    if (c.name == name) return c;
  throw std::out_of_range("no classifier result named " + std::string(name));
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["problems"] = num_problems;
  j["folds"] = folds;
  j["seed"] = seed;
  j["noise_rate"] = noise_rate;
  auto& sys = j["systems"] = nlohmann::json::array();
  for (const auto& s : systems) {
    sys.push_back({{"name", s.name},
                   {"accuracy", s.accuracy()},
                   {"correct", s.correct},
                   {"total", s.total},
                   {"fold_accuracy", s.fold_accuracy},
                   {"subset_accuracy", s.subset_accuracy()},
                   {"subset_correct", s.subset_correct},
                   {"subset_total", s.subset_total},
                   {"failures", s.failures}});
  }
  auto& cls = j["classifiers"] = nlohmann::json::array();
  for (const auto& c : classifiers) {
    cls.push_back({{"name", c.name},
                   {"vertex_accuracy", c.vertex_accuracy()},
                   {"edge_accuracy", c.edge_accuracy()},
                   {"udg_exact_match", c.udg_accuracy()},
                   {"vertex", {c.vertex_correct, c.vertex_total}},
                   {"edge", {c.edge_correct, c.edge_total}},
                   {"udg", {c.udg_exact, c.udg_total}}});
  }
  auto& params = j["fold_params"] = nlohmann::json::array();
  for (const auto& p : fold_params) params.push_back(params_to_json(p));
  return j;
}

std::string EvalReport::to_table() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%zu problems, %d folds, seed %llu, derived-gold noise %.3f\n\n",
                num_problems, folds, static_cast<unsigned long long>(seed), noise_rate);
  out += line;
  std::snprintf(line, sizeof line, "%-12s %9s %13s %17s\n", "system", "accuracy", "correct",
                "distractor/rate");
  out += line;
  for (const auto& s : systems) {
    std::snprintf(line, sizeof line, "%-12s %9.3f %6zu/%-6zu %8.3f (%zu/%zu)\n", s.name.c_str(),
                  s.accuracy(), s.correct, s.total, s.subset_accuracy(), s.subset_correct,
                  s.subset_total);
    out += line;
  }
  out += '\n';
  std::snprintf(line, sizeof line, "%-12s %9s %9s %9s\n", "features", "vertex", "edge",
                "udg-exact");
  out += line;
  for (const auto& c : classifiers) {
    std::snprintf(line, sizeof line, "%-12s %9.3f %9.3f %9.3f\n", c.name.c_str(),
                  c.vertex_accuracy(), c.edge_accuracy(), c.udg_accuracy());
    out += line;
  }
  return out;
}

namespace {

struct TestItem {
  std::string id;
  ScoreTables tables;
  std::vector<Rational> values;
  Rational answer;
  UnitDependencyGraph gold_graph;
  bool subset;
};

std::vector<TestItem> test_items(const std::vector<Problem>& test, const ClassifierSuite& suite) {
  std::vector<TestItem> out;
  for (const auto& p : test) {
    out.push_back({p.id, compute_score_tables(p, suite), p.values(), p.gold->answer,
                   derive_gold(p).graph, in_distractor_rate_subset(p)});
  }
  return out;
}

void score_system(SystemResult& result, const std::vector<TestItem>& items,
                  const ScalingParams& params, std::size_t beam) {
  std::size_t correct = 0;
  for (const auto& item : items) {
    bool ok = false;
    try {
      ok = solve_joint(item.tables, item.values, params, beam).value == item.answer;
    } catch (const InferenceError&) {
    } catch (const EvalError&) {
    }
    correct += ok;
    if (!ok) result.failures.push_back(item.id);
    result.subset_total += item.subset;
    result.subset_correct += item.subset && ok;
  }
  result.correct += correct;
  result.total += items.size();
  result.fold_accuracy.push_back(ratio(correct, items.size()));
}

void score_classifiers(ClassifierResult& result, const std::vector<TestItem>& items,
                       const ScalingParams& params) {
  for (const auto& item : items) {
    const auto& gold = item.gold_graph;
    for (int v = 0; v < gold.num_vertices(); ++v) {
      auto predicted = item.tables.vertex_rate(v) > 0 ? VertexLabel::Rate : VertexLabel::NotRate;
      result.vertex_correct += predicted == gold.vertex(v);
      ++result.vertex_total;
    }
    for_each_pair(gold.num_vertices(), [&](int i, int j) {
      EdgeType best = EdgeType::SameUnit;
      for (auto t : kAllEdgeTypes)
        if (item.tables.edge(i, j, t) > item.tables.edge(i, j, best)) best = t;
      result.edge_correct += best == gold.edge(i, j);
      ++result.edge_total;
    });
    result.udg_exact += predict_udg(item.tables, params) == gold;
    ++result.udg_total;
  }
}

LambdaGrid restricted(LambdaGrid grid, bool zero_vertex, bool zero_edge) {
  if (zero_vertex) grid.vertex = {0};
  if (zero_edge) grid.edge = {0};
  return grid;
}

std::vector<Problem> concat(const std::vector<Problem>& a, const std::vector<Problem>& b) {
  std::vector<Problem> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

EvalReport run_evaluation(const std::vector<Problem>& problems, const EvalConfig& config) {
  for (const auto& p : problems)
    if (!p.gold || !p.gold->tree)
      throw DataError("problem '" + p.id + "' has no gold tree; evaluation needs one");

  EvalReport report;
  report.num_problems = problems.size();
  report.folds = config.folds;
  report.seed = config.seed;
  std::vector<DerivedUdgGold> derived;
  for (const auto& p : problems) derived.push_back(derive_gold(p));
  report.noise_rate = noise_rate(derived);

  LambdaGrid grid = config.grid;
  if (config.lambda_vertex) grid.vertex = {*config.lambda_vertex};
  if (config.lambda_edge) grid.edge = {*config.lambda_edge};

  const char* const system_names[] = {"full", "base", "no-vertex", "no-edge"};
  auto add_system = [&](const char* name) { report.systems.emplace_back().name = name; };
  auto add_classifier = [&](const char* name) { report.classifiers.emplace_back().name = name; };
  for (const auto& name : system_names) add_system(name);
  add_classifier("all");
  FeatureFlags no_rule = config.flags, no_context = config.flags;
  no_rule.rule = false;
  no_context.context = false;
  if (config.feature_ablations) {
    add_system("no-rule");
    add_system("no-context");
    add_classifier("no-rule");
    add_classifier("no-context");
  }

  auto split = make_folds(problems, config.folds, config.seed, config.dev_fraction);
  for (int f = 0; f < config.folds; ++f) {
    auto data = fold_data(problems, split, f);
    if (data.dev.empty()) throw std::invalid_argument("fold has an empty development set");

    // One training on the training folds serves all four lambda settings.
    auto suite = train_suite(data.train, config.flags, config.train);
    std::vector<TuningItem> dev;
    for (const auto& p : data.dev) dev.push_back(make_tuning_item(p, suite));
    std::vector<ScalingParams> params = {
        tune_lambdas(dev, grid, config.beam),
        tune_lambdas(dev, restricted(grid, true, true), config.beam),
        tune_lambdas(dev, restricted(grid, true, false), config.beam),
        tune_lambdas(dev, restricted(grid, false, true), config.beam)};
    report.fold_params.push_back(params[0]);

    auto final_suite = train_suite(concat(data.train, data.dev), config.flags, config.train);
    auto items = test_items(data.test, final_suite);
    for (std::size_t s = 0; s < params.size(); ++s)
      score_system(report.systems[s], items, params[s], config.beam);
    score_classifiers(report.classifiers[0], items, params[0]);

    if (config.feature_ablations) {
      const FeatureFlags ablated[] = {no_rule, no_context};
      for (std::size_t a = 0; a < 2; ++a) {
        auto system = train_and_tune(data.train, data.dev, ablated[a], config.train, grid,
                                     config.beam);
        auto ablated_items = test_items(data.test, system.suite);
        score_system(report.systems[4 + a], ablated_items, system.params, config.beam);
        score_classifiers(report.classifiers[1 + a], ablated_items, system.params);
      }
    }
  }
  return report;
}

}  // namespace unitdep
