#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "meboost/baselines.hpp"
#include "meboost/dataset.hpp"
#include "meboost/meboost.hpp"
#include "meboost/metrics.hpp"

namespace meboost {

enum class MethodKind { meboost, adaboost_dt, adaboost_et, rusboost, smoteboost };

/// "meboost", "adaboost-dt", "adaboost-et", "rusboost", "smoteboost".
std::string_view to_string(MethodKind kind);
MethodKind method_kind_from_string(std::string_view text);

struct MethodSpec {
  std::string name;
  MethodKind kind = MethodKind::meboost;
  MEBoostConfig boost;
  SamplerConfig sampler;
};

/// Defaults for a method: RUSBoost undersamples, SMOTEBoost oversamples,
/// the others do not sample.
MethodSpec default_method(MethodKind kind);

/// Trains `method` on `train`, stopping on `holdout`. `seed` replaces the
/// configured boosting and sampler seeds.
MEBoostResult train_method(const MethodSpec& method, const Dataset& train, const Dataset& holdout,
                           std::uint64_t seed);

enum class DatasetFormat { keel, csv };

struct DatasetSource {
  std::string name;
  std::filesystem::path path;
  DatasetFormat format = DatasetFormat::keel;
  LabelColumn label_column = std::string("class");
  std::string positive_label;

  Dataset load() const;
};

struct ExperimentConfig {
  std::vector<DatasetSource> datasets;
  std::vector<MethodSpec> methods;
  SplitPlan split;
  std::uint64_t base_seed = 0;

  void validate() const;

  /// Parses the benchmark config. Relative dataset paths resolve against
  /// `base_dir`. Unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

/// One repeat's partition: the validation holdout and the CV folds over the
/// remaining rows.
struct RepeatSplit {
  Dataset validation;
  std::vector<Partition> folds;
};

/// Validation holdout seeded with `seed`, folds with a seed derived from it.
RepeatSplit split_repeat(const Dataset& d, const SplitPlan& plan, std::uint64_t seed);

struct RunScore {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  double auroc = 0.0;  // on the validation set
  double holdout_auroc = 0.0;
  std::size_t ensemble_size = 0;
  std::size_t rounds_trained = 0;
};

struct MethodResult {
  std::string method;
  double mean_auroc = 0.0;
  double std_auroc = 0.0;
  std::vector<RunScore> runs;
  /// Validation ROC of the highest-scoring run.
  RocCurve roc;
  std::size_t roc_repeat = 0;
  std::size_t roc_fold = 0;
  std::string error;
};

struct DatasetResult {
  std::string dataset;
  std::optional<ImbalanceSummary> summary;
  std::string error;
  std::vector<MethodResult> methods;
};

struct ExperimentReport {
  std::vector<DatasetResult> datasets;
  nlohmann::json provenance;
};

/// Runs every (dataset, method, repeat, fold) cell. Repeat r splits with seed
/// base_seed + r. Output does not depend on `jobs`.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);

nlohmann::json report_to_json(const ExperimentReport& report);

/// Rows are datasets, columns methods, cells mean auROC to two decimals.
/// The best cell(s) of each row carry a trailing '*'.
std::string render_table(const ExperimentReport& report);

/// Writes report.json, summary.csv and roc/<dataset>__<method>.csv under
/// `out_dir`.
void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace meboost
