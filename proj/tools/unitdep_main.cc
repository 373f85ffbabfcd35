// unitdep: corpus tooling, training, evaluation and solving from the shell.
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unitdep/annotate.h"
#include "unitdep/corpus.h"
#include "unitdep/error.h"
#include "unitdep/evaluate.h"
#include "unitdep/infer.h"
#include "unitdep/learn.h"
#include "unitdep/synth.h"
#include "unitdep/text.h"

using namespace unitdep;
using nlohmann::json;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::size_t beam = 200;
  bool no_rule = false;
  bool no_context = false;
  std::optional<double> lambda_vertex;
  std::optional<double> lambda_edge;
  int epochs = 10;

  FeatureFlags flags() const { return {!no_rule, !no_context}; }
  TrainOptions train_options() const { return {epochs, seed}; }
};

// Writes to `path`, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw DataError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Like read_problems, but rewrites number words as digits before parsing.
std::vector<Problem> read_normalized(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<Problem> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto record = json::parse(line);
      if (record.is_object() && record.contains("text") && record["text"].is_string())
        record["text"] = normalize_digits(record["text"].get<std::string>());
      if (record.is_object() && record.contains("tree") && record["tree"].is_string())
        record["tree"] = normalize_digits(record["tree"].get<std::string>());
      out.push_back(problem_from_json(record));
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_jsonl(std::ostream& os, const std::vector<Problem>& problems) {
  for (const auto& p : problems) os << problem_to_json(p).dump() << '\n';
}

// Seeded shuffle, then the first `fraction` of problems becomes dev.
void split_dev(const std::vector<Problem>& problems, double fraction, std::uint64_t seed,
               std::vector<Problem>& train, std::vector<Problem>& dev) {
  std::vector<std::size_t> order(problems.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  auto n_dev = static_cast<std::size_t>(fraction * static_cast<double>(problems.size()) + 0.5);
  n_dev = std::clamp<std::size_t>(n_dev, 1, problems.size() - 1);
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_dev ? dev : train).push_back(problems[order[i]]);
}

struct Model {
  ClassifierSuite suite;
  ScalingParams params;
};

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    auto j = json::parse(in);
    if (!j.is_object() || !j.contains("suite")) throw DataError(path + ": not a model file");
    return {ClassifierSuite::from_json(j.at("suite")), params_from_json(j.value("params", json::object()))};
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Arithmetic word problem solver with unit dependency graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--beam", g.beam, "Beam width over candidate trees (0 keeps all)")
      ->capture_default_str();
  app.add_option("--epochs", g.epochs, "Perceptron epochs")->capture_default_str()->check(
      CLI::PositiveNumber);
  app.add_flag("--no-rule-features", g.no_rule, "Drop the rule-based features");
  app.add_flag("--no-context-features", g.no_context, "Drop the context features");
  app.add_option("--lambda-vertex", g.lambda_vertex, "Fix the vertex term weight");
  app.add_option("--lambda-edge", g.lambda_edge, "Fix the edge term weight");

  // normalize
  std::string norm_in, norm_out, subset;
  double threshold = 0.8;
  auto* normalize = app.add_subcommand("normalize", "Digit-normalize and deduplicate a corpus");
  normalize->add_option("input", norm_in, "Input JSONL")->required();
  normalize->add_option("output", norm_out, "Output JSONL (default stdout)");
  normalize->add_option("--threshold", threshold, "Near-duplicate overlap threshold")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  normalize->add_option("--subset", subset, "Keep the low-overlap half")
      ->check(CLI::IsMember({"lex", "tmpl"}));

  // folds
  std::string folds_in, folds_out;
  int k = 5;
  double dev_fraction = 0.2;
  auto* folds = app.add_subcommand("folds", "Write a k-fold split as JSON");
  folds->add_option("input", folds_in, "Corpus JSONL")->required();
  folds->add_option("-k,--folds", k, "Number of folds")->capture_default_str();
  folds->add_option("--dev-fraction", dev_fraction, "Dev share of each training split")
      ->capture_default_str();
  folds->add_option("-o,--out", folds_out, "Output path (default stdout)");

  // train
  std::string train_in, model_out;
  auto* train = app.add_subcommand("train", "Train classifiers and tune the scaling weights");
  train->add_option("input", train_in, "Corpus JSONL with gold trees")->required();
  train->add_option("-o,--out", model_out, "Model path")->required();
  train->add_option("--dev-fraction", dev_fraction, "Share held out for tuning")
      ->capture_default_str()->check(CLI::Range(0.01, 0.99));

  // eval
  std::string eval_in, report_json;
  bool no_ablations = false;
  auto* eval = app.add_subcommand("eval", "Cross-validated evaluation with ablations");
  eval->add_option("input", eval_in, "Corpus JSONL with gold trees")->required();
  eval->add_option("-k,--folds", k, "Number of folds")->capture_default_str();
  eval->add_option("--dev-fraction", dev_fraction, "Dev share of each training split")
      ->capture_default_str();
  eval->add_option("--report-json", report_json, "Also write the report as JSON");
  eval->add_flag("--no-ablations", no_ablations, "Skip the feature ablation retraining");

  // solve
  std::string model_path, text, text_file;
  std::size_t trace = 0;
  auto* solve = app.add_subcommand("solve", "Solve one problem with a trained model");
  solve->add_option("-m,--model", model_path, "Model path")->required();
  auto* text_opt = solve->add_option("--text", text, "Problem text");
  auto* file_opt = solve->add_option("--file", text_file, "File holding the problem text");
  text_opt->excludes(file_opt);
  solve->add_option("--trace", trace, "Print the top N tuples as JSON lines instead");

  // annotate
  std::string ann_in, ann_out;
  auto* annotate = app.add_subcommand("annotate", "Derive gold graphs from gold trees");
  annotate->add_option("input", ann_in, "Corpus JSONL with gold trees")->required();
  annotate->add_option("-o,--out", ann_out, "Output JSONL (default stdout)");

  // gen-corpus
  std::size_t size = 500;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-corpus", "Write a synthetic corpus");
  gen->add_option("--size", size, "Number of problems")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "Output JSONL (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (*normalize) {
    auto problems = prune_near_duplicates(read_normalized(norm_in), threshold);
    if (subset == "lex") problems = lexical_subset(problems);
    if (subset == "tmpl") problems = template_subset(problems);
    Output out(norm_out);
    write_jsonl(out.stream(), problems);
  } else if (*folds) {
    auto split = make_folds(read_problems(folds_in), k, g.seed, dev_fraction);
    Output out(folds_out);
    out.stream() << split.to_json().dump(2) << '\n';
  } else if (*train) {
    auto problems = read_problems(train_in);
    if (problems.size() < 2) throw DataError("training needs at least two problems");
    std::vector<Problem> tr, dev;
    split_dev(problems, dev_fraction, g.seed, tr, dev);
    LambdaGrid grid;
    if (g.lambda_vertex) grid.vertex = {*g.lambda_vertex};
    if (g.lambda_edge) grid.edge = {*g.lambda_edge};
    auto system = train_and_tune(tr, dev, g.flags(), g.train_options(), grid, g.beam);
    Output out(model_out);
    out.stream() << json{{"suite", system.suite.to_json()},
                         {"params", params_to_json(system.params)}}.dump()
                 << '\n';
    std::cerr << "params " << params_to_json(system.params).dump() << '\n';
  } else if (*eval) {
    EvalConfig config;
    config.folds = k;
    config.seed = g.seed;
    config.dev_fraction = dev_fraction;
    config.beam = g.beam;
    config.train = g.train_options();
    config.flags = g.flags();
    config.lambda_vertex = g.lambda_vertex;
    config.lambda_edge = g.lambda_edge;
    config.feature_ablations = !no_ablations;
    auto report = run_evaluation(read_problems(eval_in), config);
    std::cout << report.to_table();
    if (!report_json.empty()) {
      Output out(report_json);
      out.stream() << report.to_json().dump(2) << '\n';
    }
  } else if (*solve) {
    if (!text_file.empty()) {
      std::ifstream in(text_file);
      if (!in) throw DataError("cannot open " + text_file);
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    } else if (text.empty()) {
      std::cerr << "solve: one of --text or --file is required\n";
      return kUsageError;
    }
    auto model = load_model(model_path);
    if (g.lambda_vertex) model.params.lambda_vertex = *g.lambda_vertex;
    if (g.lambda_edge) model.params.lambda_edge = *g.lambda_edge;
    auto problem = make_problem("input", normalize_digits(text));
    auto tables = compute_score_tables(problem, model.suite);
    auto values = problem.values();
    auto tuples = rank_tuples(tables, values, model.params, g.beam, std::max<std::size_t>(trace, 1));
    if (trace > 0) {
      for (const auto& t : tuples) std::cout << t.to_json(&problem).dump() << '\n';
    } else {
      std::cout << tuples.front().to_json(&problem).dump(2) << '\n';
    }
  } else if (*annotate) {
    auto problems = read_problems(ann_in);
    std::vector<DerivedUdgGold> derived;
    derived.reserve(problems.size());
    Output out(ann_out);
    for (const auto& p : problems) {
      derived.push_back(derive_gold(p));
      out.stream() << json{{"id", p.id}, {"udg", derived_to_json(derived.back())}}.dump() << '\n';
    }
    std::cerr << "noise_rate " << noise_rate(derived) << '\n';
  } else if (*gen) {
    auto problems = generate_corpus(g.seed, size);
    Output out(gen_out);
    write_jsonl(out.stream(), problems);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const InferenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
}
