#include "meboost/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "meboost/serialization.hpp"

namespace meboost {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, std::string_view where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

MethodSpec method_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"method", "name", "window", "max_rounds", "improvement_epsilon", "first_kind",
                       "max_retries", "max_depth", "min_leaf_weight", "extra_tree_feature_count",
                       "target_ratio", "smote_k", "scale_features"},
                      "method entry");
  if (!j.contains("method")) throw InvalidArgument("method entry needs a 'method' field");
  MethodSpec m = default_method(method_kind_from_string(j.at("method").get<std::string>()));
  read_if(j, "name", m.name);
  read_if(j, "window", m.boost.window);
  read_if(j, "max_rounds", m.boost.max_rounds);
  read_if(j, "improvement_epsilon", m.boost.improvement_epsilon);
  read_if(j, "max_retries", m.boost.max_retries);
  read_if(j, "max_depth", m.boost.tree.max_depth);
  read_if(j, "extra_tree_feature_count", m.boost.tree.extra_tree_feature_count);
  if (j.contains("first_kind")) {
    m.boost.first_kind = learner_kind_from_string(j.at("first_kind").get<std::string>());
  }
  if (j.contains("min_leaf_weight")) m.boost.tree.min_leaf_weight = j.at("min_leaf_weight").get<double>();
  read_if(j, "target_ratio", m.sampler.target_ratio);
  read_if(j, "smote_k", m.sampler.smote_k);
  read_if(j, "scale_features", m.sampler.scale_features);
  return m;
}

DatasetSource dataset_from_json(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown_keys(j, {"name", "path", "format", "label_column", "positive_label"}, "dataset entry");
  if (!j.contains("path")) throw InvalidArgument("dataset entry needs a 'path' field");
  DatasetSource s;
  s.path = j.at("path").get<std::string>();
  if (s.path.is_relative()) s.path = base_dir / s.path;
  s.name = j.contains("name") ? j.at("name").get<std::string>() : s.path.stem().string();
  const std::string format = j.contains("format") ? j.at("format").get<std::string>() : "keel";
  if (format == "keel") {
    s.format = DatasetFormat::keel;
  } else if (format == "csv") {
    s.format = DatasetFormat::csv;
    if (!j.contains("positive_label")) throw InvalidArgument("csv dataset needs 'positive_label'");
    s.positive_label = j.at("positive_label").get<std::string>();
    if (j.contains("label_column")) {
      const auto& col = j.at("label_column");
      if (col.is_number_unsigned()) {
        s.label_column = col.get<std::size_t>();
      } else {
        s.label_column = col.get<std::string>();
      }
    }
  } else {
    throw InvalidArgument("unknown dataset format '" + format + "'");
  }
  return s;
}

json source_to_json(const DatasetSource& s) {
  json j = {{"name", s.name},
            {"path", s.path.string()},
            {"format", s.format == DatasetFormat::keel ? "keel" : "csv"}};
  if (s.format == DatasetFormat::csv) {
    j["positive_label"] = s.positive_label;
    if (const auto* name = std::get_if<std::string>(&s.label_column)) {
      j["label_column"] = *name;
    } else {
      j["label_column"] = std::get<std::size_t>(s.label_column);
    }
  }
  return j;
}

json summary_to_json(const ImbalanceSummary& s) {
  return {{"n_instances", s.n_instances},
          {"n_features", s.n_features},
          {"n_majority", s.n_majority},
          {"n_minority", s.n_minority},
          {"imbalance_ratio", s.imbalance_ratio}};
}

json nullable(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

std::string file_safe(std::string_view name) {
  std::string out(name);
  for (char& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return out;
}

std::string two_decimals(double value) {
  if (!std::isfinite(value)) return "err";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

}  // namespace

std::string_view to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::meboost:
      return "meboost";
    case MethodKind::adaboost_dt:
      return "adaboost-dt";
    case MethodKind::adaboost_et:
      return "adaboost-et";
    case MethodKind::rusboost:
      return "rusboost";
    case MethodKind::smoteboost:
      return "smoteboost";
  }
  return "meboost";
}

MethodKind method_kind_from_string(std::string_view text) {
  for (const auto kind : {MethodKind::meboost, MethodKind::adaboost_dt, MethodKind::adaboost_et,
                          MethodKind::rusboost, MethodKind::smoteboost}) {
    if (text == to_string(kind)) return kind;
  }
  throw InvalidArgument("unknown method '" + std::string(text) +
                        "' (expected meboost, adaboost-dt, adaboost-et, rusboost or smoteboost)");
}

MethodSpec default_method(MethodKind kind) {
  MethodSpec m;
  m.kind = kind;
  m.name = std::string(to_string(kind));
  if (kind == MethodKind::rusboost) m.sampler.method = SamplingMethod::random_undersample;
  if (kind == MethodKind::smoteboost) m.sampler.method = SamplingMethod::smote;
  return m;
}

MEBoostResult train_method(const MethodSpec& method, const Dataset& train, const Dataset& holdout,
                           std::uint64_t seed) {
  MEBoostConfig boost = method.boost;
  boost.seed = seed;
  SamplerConfig sampler = method.sampler;
  sampler.seed = derive_seed(seed, 0x5a);
  switch (method.kind) {
    case MethodKind::meboost:
      return train_meboost(train, holdout, boost);
    case MethodKind::adaboost_dt:
    case MethodKind::rusboost:
    case MethodKind::smoteboost:
      return train_adaboost_single(train, holdout, LearnerKind::decision_tree, sampler, boost);
    case MethodKind::adaboost_et:
      return train_adaboost_single(train, holdout, LearnerKind::extra_tree, sampler, boost);
  }
  throw InvalidArgument("unknown method kind");
}

Dataset DatasetSource::load() const {
  return format == DatasetFormat::keel ? parse_keel_file(path)
                                       : parse_csv_file(path, label_column, positive_label);
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw InvalidArgument("config lists no datasets");
  if (methods.empty()) throw InvalidArgument("config lists no methods");
  std::set<std::string> names;
  for (const auto& m : methods) {
    if (!names.insert(m.name).second) throw InvalidArgument("duplicate method name '" + m.name + "'");
    m.boost.validate();
    m.sampler.validate();
  }
  names.clear();
  for (const auto& d : datasets) {
    if (!names.insert(d.name).second) throw InvalidArgument("duplicate dataset name '" + d.name + "'");
  }
  if (!(split.validation_fraction > 0.0 && split.validation_fraction < 1.0)) {
    throw InvalidArgument("validation_fraction must lie in (0, 1)");
  }
  if (split.folds < 2) throw InvalidArgument("folds must be at least 2");
  if (split.repeats < 1) throw InvalidArgument("repeats must be at least 1");
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown_keys(j, {"base_seed", "split", "datasets", "methods"}, "config");
  ExperimentConfig cfg;
  read_if(j, "base_seed", cfg.base_seed);
  if (j.contains("split")) {
    const auto& s = j.at("split");
    reject_unknown_keys(s, {"validation_fraction", "folds", "repeats"}, "split");
    read_if(s, "validation_fraction", cfg.split.validation_fraction);
    read_if(s, "folds", cfg.split.folds);
    read_if(s, "repeats", cfg.split.repeats);
  }
  if (j.contains("datasets")) {
    for (const auto& d : j.at("datasets")) cfg.datasets.push_back(dataset_from_json(d, base_dir));
  }
  if (j.contains("methods")) {
    for (const auto& m : j.at("methods")) cfg.methods.push_back(method_from_json(m));
  }
  cfg.split.seed = cfg.base_seed;
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path());
}

RepeatSplit split_repeat(const Dataset& d, const SplitPlan& plan, std::uint64_t seed) {
  SplitPlan seeded = plan;
  seeded.seed = seed;
  seeded.validate(d);
  Partition outer = stratified_holdout(d, plan.validation_fraction, seed);
  RepeatSplit split;
  split.folds = stratified_kfold(outer.train, plan.folds, derive_seed(seed, 1));
  split.validation = std::move(outer.test);
  return split;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  cfg.validate();
  ExperimentReport report;

  struct Prepared {
    std::optional<Dataset> data;
    std::vector<RepeatSplit> repeats;
  };
  std::vector<Prepared> prepared(cfg.datasets.size());
  for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
    DatasetResult result;
    result.dataset = cfg.datasets[di].name;
    try {
      Dataset data = cfg.datasets[di].load();
      result.summary = summarize(data);
      for (std::size_t r = 0; r < cfg.split.repeats; ++r) {
        prepared[di].repeats.push_back(split_repeat(data, cfg.split, cfg.base_seed + r));
      }
      prepared[di].data = std::move(data);
    } catch (const std::exception& e) {
      result.error = e.what();
      prepared[di].repeats.clear();
    }
    report.datasets.push_back(std::move(result));
  }

  struct Cell {
    std::size_t dataset;
    std::size_t repeat;
    std::size_t fold;
    std::size_t method;
  };
  struct CellResult {
    RunScore score;
    RocCurve roc;
    std::string error;
  };
  std::vector<Cell> cells;
  for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
    if (!prepared[di].data) continue;
    for (std::size_t r = 0; r < cfg.split.repeats; ++r) {
      for (std::size_t f = 0; f < cfg.split.folds; ++f) {
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) cells.push_back({di, r, f, mi});
      }
    }
  }
  std::vector<CellResult> results(cells.size());

  auto run_cell = [&](std::size_t index) {
    const Cell& cell = cells[index];
    const RepeatSplit& split = prepared[cell.dataset].repeats[cell.repeat];
    const Partition& fold = split.folds[cell.fold];
    const MethodSpec& method = cfg.methods[cell.method];
    CellResult& out = results[index];
    out.score.repeat = cell.repeat;
    out.score.fold = cell.fold;
    try {
      const std::uint64_t seed =
          derive_seed(cfg.base_seed + cell.repeat, cell.fold + 1, fnv1a(method.name));
      const MEBoostResult trained = train_method(method, fold.train, fold.test, seed);
      const std::vector<double> scores = ensemble_scores(trained.best_model, split.validation);
      out.score.auroc = auroc(scores, split.validation.labels());
      out.score.holdout_auroc = trained.best_score;
      out.score.ensemble_size = trained.best_model.size();
      out.score.rounds_trained = trained.rounds_trained;
      out.roc = roc_curve(scores, split.validation.labels());
    } catch (const std::exception& e) {
      out.error = "repeat " + std::to_string(cell.repeat) + " fold " + std::to_string(cell.fold) +
                  ": " + e.what();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) run_cell(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Reduction in cell order.
  for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
    if (!prepared[di].data) continue;
    auto& dataset_result = report.datasets[di];
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      MethodResult mr;
      mr.method = cfg.methods[mi].name;
      double best = -1.0;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].dataset != di || cells[i].method != mi) continue;
        const CellResult& cr = results[i];
        if (!cr.error.empty()) {
          if (mr.error.empty()) mr.error = cr.error;
          continue;
        }
        mr.runs.push_back(cr.score);
        if (cr.score.auroc > best) {
          best = cr.score.auroc;
          mr.roc = cr.roc;
          mr.roc_repeat = cr.score.repeat;
          mr.roc_fold = cr.score.fold;
        }
      }
      if (!mr.error.empty() || mr.runs.empty()) {
        mr.mean_auroc = std::numeric_limits<double>::quiet_NaN();
        mr.std_auroc = std::numeric_limits<double>::quiet_NaN();
      } else {
        double sum = 0.0;
        for (const auto& run : mr.runs) sum += run.auroc;
        mr.mean_auroc = sum / static_cast<double>(mr.runs.size());
        double sq = 0.0;
        for (const auto& run : mr.runs) sq += (run.auroc - mr.mean_auroc) * (run.auroc - mr.mean_auroc);
        mr.std_auroc = mr.runs.size() > 1 ? std::sqrt(sq / static_cast<double>(mr.runs.size() - 1)) : 0.0;
      }
      dataset_result.methods.push_back(std::move(mr));
    }
  }

  json datasets = json::array();
  for (const auto& d : cfg.datasets) datasets.push_back(source_to_json(d));
  json methods = json::array();
  for (const auto& m : cfg.methods) {
    methods.push_back({{"name", m.name},
                       {"method", to_string(m.kind)},
                       {"boost", to_json(m.boost)},
                       {"sampler", to_json(m.sampler)}});
  }
  report.provenance = {
      {"config",
       {{"base_seed", cfg.base_seed},
        {"split",
         {{"validation_fraction", cfg.split.validation_fraction},
          {"folds", cfg.split.folds},
          {"repeats", cfg.split.repeats}}},
        {"datasets", std::move(datasets)},
        {"methods", std::move(methods)}}},
      {"seeds",
       {{"repeat_split", "base_seed + repeat"},
        {"folds", "derive_seed(repeat_seed, 1)"},
        {"training", "derive_seed(repeat_seed, fold + 1, fnv1a(method name))"}}},
      {"decisions",
       {{"validation_split", "stratified; largest-remainder quotas; >= 1 instance per class on each side"},
        {"cv_folds", "stratified round-robin with seeded offset"},
        {"early_stopping_holdout", "cv test fold"},
        {"reported_metric", "auROC of the best ensemble on the validation set"},
        {"improvement_rule", "score > best + improvement_epsilon; equality is non-improvement"},
        {"skipped_round", "counts as non-improving"},
        {"weight_update", "discrete AdaBoost: w * exp(-alpha * y * h), renormalized"},
        {"zero_error", "clamped to 1e-10 before alpha"},
        {"rejection", "retry with fresh seed; MEBoost replaces a rejected decision tree with an extra tree"},
        {"roc_scores", "ensemble margins"},
        {"aggregation", "grand mean over repeats x folds"},
        {"std", "sample standard deviation"}}}};
  return report;
}

json report_to_json(const ExperimentReport& report) {
  json datasets = json::array();
  for (const auto& d : report.datasets) {
    json dj = {{"dataset", d.dataset}};
    dj["summary"] = d.summary ? summary_to_json(*d.summary) : json(nullptr);
    if (!d.error.empty()) dj["error"] = d.error;
    json methods = json::array();
    for (const auto& m : d.methods) {
      json runs = json::array();
      for (const auto& r : m.runs) {
        runs.push_back({{"repeat", r.repeat},
                        {"fold", r.fold},
                        {"validation_auroc", r.auroc},
                        {"holdout_auroc", r.holdout_auroc},
                        {"ensemble_size", r.ensemble_size},
                        {"rounds_trained", r.rounds_trained}});
      }
      json mj = {{"method", m.method},
                 {"mean_auroc", nullable(m.mean_auroc)},
                 {"std_auroc", nullable(m.std_auroc)},
                 {"n_runs", m.runs.size()},
                 {"runs", std::move(runs)},
                 {"roc", {{"repeat", m.roc_repeat}, {"fold", m.roc_fold}, {"curve", to_json(m.roc)}}}};
      if (!m.error.empty()) mj["error"] = m.error;
      methods.push_back(std::move(mj));
    }
    dj["methods"] = std::move(methods);
    datasets.push_back(std::move(dj));
  }
  return {{"datasets", std::move(datasets)}, {"provenance", report.provenance}};
}

std::string render_table(const ExperimentReport& report) {
  std::vector<std::string> methods;
  for (const auto& d : report.datasets) {
    for (const auto& m : d.methods) {
      if (std::find(methods.begin(), methods.end(), m.method) == methods.end()) methods.push_back(m.method);
    }
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"dataset"});
  rows.back().insert(rows.back().end(), methods.begin(), methods.end());
  for (const auto& d : report.datasets) {
    std::vector<std::string> row{d.dataset};
    std::vector<std::string> cells(methods.size(), d.error.empty() ? "-" : "err");
    double best = -1.0;
    for (const auto& m : d.methods) {
      if (std::isfinite(m.mean_auroc)) best = std::max(best, std::round(m.mean_auroc * 100.0));
    }
    for (const auto& m : d.methods) {
      const auto col = static_cast<std::size_t>(std::find(methods.begin(), methods.end(), m.method) - methods.begin());
      cells[col] = two_decimals(m.mean_auroc);
      if (std::isfinite(m.mean_auroc) && std::round(m.mean_auroc * 100.0) == best) cells[col] += '*';
    }
    row.insert(row.end(), cells.begin(), cells.end());
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(methods.size() + 1, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const std::string& cell = rows[r][c];
      if (c == 0) {
        out << cell << std::string(width[c] - cell.size(), ' ');
      } else {
        out << " | " << std::string(width[c] - cell.size(), ' ') << cell;
      }
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = width[0];
      for (std::size_t c = 1; c < width.size(); ++c) total += width[c] + 3;
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "roc");
  {
    std::ofstream out(out_dir / "report.json");
    out << report_to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream out(out_dir / "summary.csv");
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "dataset,method,mean_auroc,std_auroc,n_runs\n";
    for (const auto& d : report.datasets) {
      for (const auto& m : d.methods) {
        out << d.dataset << ',' << m.method << ',' << m.mean_auroc << ',' << m.std_auroc << ','
            << m.runs.size() << '\n';
      }
    }
  }
  for (const auto& d : report.datasets) {
    for (const auto& m : d.methods) {
      if (m.roc.points.empty()) continue;
      std::ofstream out(out_dir / "roc" / (file_safe(d.dataset) + "__" + file_safe(m.method) + ".csv"));
      write_roc_csv(m.roc, out);
    }
  }
}

}  // namespace meboost
