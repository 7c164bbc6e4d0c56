#include "cli_app.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "CLI11.hpp"

#include "meboost/baselines.hpp"
#include "meboost/dataset.hpp"
#include "meboost/experiment.hpp"
#include "meboost/meboost.hpp"
#include "meboost/metrics.hpp"
#include "meboost/serialization.hpp"

namespace meboost::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kOutputDirEnv = "MEBOOST_OUTPUT_DIR";
constexpr const char* kModelFormat = "meboost-model/1";

/// A usage or configuration problem; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataOptions {
  std::string path;
  std::string format = "auto";
  std::string label_column = "class";
  std::string positive_label;

  Dataset load() const {
    if (!fs::exists(path)) throw UsageError("no such file: " + path);
    std::string fmt = format;
    if (fmt == "auto") fmt = fs::path(path).extension() == ".csv" ? "csv" : "keel";
    if (fmt == "keel") return parse_keel_file(path);
    if (positive_label.empty()) throw UsageError("--positive-label is required for CSV input");
    LabelColumn column = label_column;
    if (!label_column.empty() && std::all_of(label_column.begin(), label_column.end(), ::isdigit)) {
      column = static_cast<std::size_t>(std::stoul(label_column));
    }
    return parse_csv_file(path, column, positive_label);
  }
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
  cmd->add_option("dataset", opts.path, "Dataset file (KEEL .dat or CSV)")->required();
  cmd->add_option("--format", opts.format, "Input format")
      ->check(CLI::IsMember({"auto", "keel", "csv"}))
      ->capture_default_str();
  cmd->add_option("--label-column", opts.label_column, "CSV label column (name or index)")
      ->capture_default_str();
  cmd->add_option("--positive-label", opts.positive_label, "CSV token of the positive (minority) class");
}

fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "meboost-out";
}

std::string fixed(double value, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

// -----------------------------------------------------------------------------

int cmd_inspect(const DataOptions& data, bool as_json, std::ostream& out) {
  const Dataset d = data.load();
  const ImbalanceSummary s = summarize(d);
  if (as_json) {
    out << json{{"path", data.path},
                {"n_instances", s.n_instances},
                {"n_features", s.n_features},
                {"n_majority", s.n_majority},
                {"n_minority", s.n_minority},
                {"imbalance_ratio", s.imbalance_ratio},
                {"positive_class", d.positive_class_name()},
                {"negative_class", d.negative_class_name()}}
               .dump(2)
        << '\n';
    return kExitOk;
  }
  out << s.n_instances << " instances, " << s.n_features << " features, IR " << fixed(s.imbalance_ratio, 2)
      << '\n';
  out << "majority (" << d.negative_class_name() << "): " << s.n_majority << '\n';
  out << "minority (" << d.positive_class_name() << "): " << s.n_minority << '\n';
  return kExitOk;
}

struct TrainOptions {
  DataOptions data;
  std::string method = "meboost";
  std::uint64_t seed = 0;
  double holdout_fraction = 0.2;
  std::string out_dir;
  MEBoostConfig boost;
  SamplerConfig sampler;
  std::string first_kind = "decision_tree";
  double min_leaf_weight = -1.0;
};

int cmd_train(const TrainOptions& opts, std::ostream& out) {
  MethodSpec method;
  try {
    method = default_method(method_kind_from_string(opts.method));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  method.boost = opts.boost;
  method.boost.first_kind = learner_kind_from_string(opts.first_kind);
  if (opts.min_leaf_weight >= 0.0) method.boost.tree.min_leaf_weight = opts.min_leaf_weight;
  const SamplingMethod sampling = method.sampler.method;
  method.sampler = opts.sampler;
  method.sampler.method = sampling;
  try {
    method.boost.validate();
    method.sampler.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  const Dataset d = opts.data.load();
  const Partition split = stratified_holdout(d, opts.holdout_fraction, opts.seed);
  const MEBoostResult result = train_method(method, split.train, split.test, opts.seed);

  const fs::path dir = opts.out_dir.empty() ? default_output_dir() : fs::path(opts.out_dir);
  fs::create_directories(dir);
  MEBoostConfig echoed = method.boost;
  echoed.seed = opts.seed;
  const json model = {{"format", kModelFormat},
                      {"method", opts.method},
                      {"dataset", opts.data.path},
                      {"n_features", d.n_features()},
                      {"feature_names", d.feature_names()},
                      {"positive_class", d.positive_class_name()},
                      {"negative_class", d.negative_class_name()},
                      {"best_holdout_auroc", result.best_score},
                      {"best_round", result.best_round},
                      {"rounds_trained", result.rounds_trained},
                      {"skipped_rounds", result.skipped_rounds},
                      {"provenance",
                       {{"boost", to_json(echoed)},
                        {"sampler", to_json(method.sampler)},
                        {"holdout_fraction", opts.holdout_fraction}}},
                      {"ensemble", ensemble_to_json(result.best_model)}};
  {
    std::ofstream file(dir / "model.json");
    file << model.dump(2) << '\n';
  }
  {
    std::ofstream file(dir / "trajectory.csv");
    write_trajectory_csv(result.score_trajectory, file);
  }
  out << "method " << opts.method << ", seed " << opts.seed << ", window " << method.boost.window
      << ", max_rounds " << method.boost.max_rounds << ", max_depth " << method.boost.tree.max_depth << '\n';
  out << "best holdout auROC " << fixed(result.best_score, 4) << " with " << result.best_model.size()
      << " learners (round " << result.best_round << ")\n";
  out << "rounds_trained " << result.rounds_trained << '\n';
  out << "wrote " << (dir / "model.json").string() << " and " << (dir / "trajectory.csv").string() << '\n';
  return kExitOk;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, std::size_t jobs,
              std::ostream& out, std::ostream& err) {
  if (!fs::exists(config_path)) throw UsageError("no such file: " + config_path);
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_file(config_path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("config error: ") + e.what());
  }
  const ExperimentReport report = run_experiment(cfg, jobs);
  const fs::path dir = out_dir.empty() ? default_output_dir() : fs::path(out_dir);
  write_report(report, dir);
  out << render_table(report);
  bool any_ok = false;
  for (const auto& d : report.datasets) {
    if (d.error.empty()) {
      any_ok = true;
    } else {
      err << "dataset " << d.dataset << " failed: " << d.error << '\n';
    }
    for (const auto& m : d.methods) {
      if (!m.error.empty()) err << "dataset " << d.dataset << ", method " << m.method << ": " << m.error << '\n';
    }
  }
  out << "report written to " << dir.string() << '\n';
  return any_ok ? kExitOk : kExitRuntime;
}

int cmd_roc(const std::string& model_path, const DataOptions& data, const std::string& out_dir,
            std::ostream& out) {
  if (!fs::exists(model_path)) throw UsageError("no such file: " + model_path);
  json model;
  {
    std::ifstream in(model_path);
    model = json::parse(in);
  }
  if (model.value("format", "") != kModelFormat) throw UsageError("not a model file: " + model_path);
  const EnsembleModel ensemble = ensemble_from_json(model.at("ensemble"));
  const Dataset d = data.load();
  if (d.n_features() != model.at("n_features").get<std::size_t>()) {
    throw UsageError("dataset has " + std::to_string(d.n_features()) + " features, model expects " +
                     std::to_string(model.at("n_features").get<std::size_t>()));
  }
  const std::vector<double> scores = ensemble_scores(ensemble, d);
  const RocCurve curve = roc_curve(scores, d.labels());
  const fs::path dir = out_dir.empty() ? default_output_dir() : fs::path(out_dir);
  fs::create_directories(dir);
  {
    std::ofstream file(dir / "roc.csv");
    write_roc_csv(curve, file);
  }
  out << "auROC " << fixed(auroc(scores, d.labels()), 4) << " over " << d.size() << " instances\n";
  out << "wrote " << (dir / "roc.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MEBoost: boosting with alternating decision and extra trees"};
  app.name("meboost");
  app.require_subcommand(1, 1);

  DataOptions inspect_data;
  bool inspect_json = false;
  auto* inspect = app.add_subcommand("inspect", "Print dataset size, features and imbalance ratio");
  add_data_options(inspect, inspect_data);
  inspect->add_flag("--json", inspect_json, "Emit JSON");

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "Train one booster with a stratified holdout for early stopping");
  add_data_options(train, train_opts.data);
  train->add_option("--method", train_opts.method, "meboost, adaboost-dt, adaboost-et, rusboost or smoteboost")
      ->capture_default_str();
  train->add_option("--seed", train_opts.seed, "Random seed")->capture_default_str();
  train->add_option("--holdout-fraction", train_opts.holdout_fraction, "Fraction held out for early stopping")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  train->add_option("--window", train_opts.boost.window, "Stagnation window W")->capture_default_str();
  train->add_option("--max-rounds", train_opts.boost.max_rounds, "Hard cap on boosting rounds")
      ->capture_default_str();
  train->add_option("--epsilon", train_opts.boost.improvement_epsilon, "Minimum holdout improvement")
      ->capture_default_str();
  train->add_option("--first-kind", train_opts.first_kind, "Learner of odd rounds")
      ->check(CLI::IsMember({"decision_tree", "extra_tree"}))
      ->capture_default_str();
  train->add_option("--max-depth", train_opts.boost.tree.max_depth, "Tree depth limit")->capture_default_str();
  train->add_option("--min-leaf-weight", train_opts.min_leaf_weight,
                    "Minimum normalized child weight (default 1/|D|)");
  train->add_option("--extra-features", train_opts.boost.tree.extra_tree_feature_count,
                    "Extra-tree candidate features per node (0 = ceil(sqrt(p)))")
      ->capture_default_str();
  train->add_option("--target-ratio", train_opts.sampler.target_ratio, "Sampler majority:minority target")
      ->capture_default_str();
  train->add_option("--smote-k", train_opts.sampler.smote_k, "SMOTE neighbours")->capture_default_str();
  train->add_flag("--scale-features", train_opts.sampler.scale_features, "Min-max scale before SMOTE");
  train->add_option("--out", train_opts.out_dir, "Output directory (default $MEBOOST_OUTPUT_DIR or ./meboost-out)");

  std::string bench_config;
  std::string bench_out;
  std::size_t bench_jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* bench = app.add_subcommand("bench", "Run the repeated cross-validation benchmark from a JSON config");
  bench->add_option("config", bench_config, "Benchmark config (JSON)")->required();
  bench->add_option("--out", bench_out, "Output directory (default $MEBOOST_OUTPUT_DIR or ./meboost-out)");
  bench->add_option("--jobs", bench_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::string roc_model;
  DataOptions roc_data;
  std::string roc_out;
  auto* roc = app.add_subcommand("roc", "Score a dataset with a saved model and write its ROC curve");
  roc->add_option("--model", roc_model, "Model file written by `train`")->required();
  add_data_options(roc, roc_data);
  roc->add_option("--out", roc_out, "Output directory (default $MEBOOST_OUTPUT_DIR or ./meboost-out)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(inspect_data, inspect_json, out);
    if (train->parsed()) return cmd_train(train_opts, out);
    if (bench->parsed()) return cmd_bench(bench_config, bench_out, bench_jobs, out, err);
    if (roc->parsed()) return cmd_roc(roc_model, roc_data, roc_out, out);
  } catch (const UsageError& e) {
    err << "meboost: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "meboost: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace meboost::cli
