#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>

#include "meboost/experiment.hpp"

using namespace meboost;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config(std::size_t repeats, std::size_t folds) {
  nlohmann::json j = {
      {"base_seed", 2018},
      {"split", {{"validation_fraction", 0.05}, {"folds", folds}, {"repeats", repeats}}},
      {"datasets", {{{"name", "newthyroid1"}, {"path", "newthyroid1.dat"}}}},
      {"methods", {{{"method", "meboost"}}, {{"method", "adaboost-et"}, {"max_rounds", 20}}}}};
  return ExperimentConfig::from_json(j, MEBOOST_DATA_DIR);
}

MethodResult fake_method(const std::string& name, double mean) {
  MethodResult m;
  m.method = name;
  m.mean_auroc = mean;
  return m;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = tiny_config(2, 3);
  REQUIRE(cfg.datasets.size() == 1);
  CHECK(cfg.datasets[0].path == fs::path(MEBOOST_DATA_DIR) / "newthyroid1.dat");
  REQUIRE(cfg.methods.size() == 2);
  CHECK(cfg.methods[0].name == "meboost");
  CHECK(cfg.methods[1].kind == MethodKind::adaboost_et);
  CHECK(cfg.methods[1].boost.max_rounds == 20);
  CHECK(cfg.split.folds == 3);

  nlohmann::json bad = {{"base_seed", 1}, {"datasets", nlohmann::json::array()}, {"methods", nlohmann::json::array()}};
  CHECK_THROWS(ExperimentConfig::from_json(bad, "."));
  nlohmann::json typo = {{"base_seed", 1},
                         {"datasets", {{{"name", "a"}, {"path", "a.dat"}}}},
                         {"methods", {{{"method", "meboost"}, {"windw", 3}}}}};
  CHECK_THROWS(ExperimentConfig::from_json(typo, "."));
  CHECK(default_method(MethodKind::rusboost).sampler.method == SamplingMethod::random_undersample);
  CHECK(default_method(MethodKind::smoteboost).sampler.method == SamplingMethod::smote);
}

TEST_CASE("repeat split: validation is disjoint from the folds, folds cover the rest") {
  const Dataset d = parse_keel_file(fs::path(MEBOOST_DATA_DIR) / "newthyroid1.dat");
  SplitPlan plan;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RepeatSplit s = split_repeat(d, plan, seed);
    CHECK(s.validation.size() == 11);  // ceil(0.05 * 215)
    CHECK(s.validation.count(Label::positive) >= 1);
    std::set<std::uint64_t> val(s.validation.ids().begin(), s.validation.ids().end());
    std::multiset<std::uint64_t> tested;
    REQUIRE(s.folds.size() == 5);
    for (const auto& p : s.folds) {
      for (auto id : p.train.ids()) CHECK(val.count(id) == 0);
      for (auto id : p.test.ids()) CHECK(val.count(id) == 0);
      tested.insert(p.test.ids().begin(), p.test.ids().end());
      CHECK(p.train.size() + p.test.size() == d.size() - val.size());
    }
    CHECK(tested.size() == d.size() - val.size());
    CHECK(std::set<std::uint64_t>(tested.begin(), tested.end()).size() == tested.size());
  }
}

TEST_CASE("run_experiment: one score per repeat and fold, summary recomputes") {
  const ExperimentConfig cfg = tiny_config(10, 5);
  const ExperimentReport report = run_experiment(cfg, 1);
  REQUIRE(report.datasets.size() == 1);
  const DatasetResult& ds = report.datasets[0];
  CHECK(ds.error.empty());
  REQUIRE(ds.summary);
  CHECK(ds.summary->n_instances == 215);
  for (const MethodResult& m : ds.methods) {
    CHECK(m.error.empty());
    REQUIRE(m.runs.size() == 50);
    std::set<std::pair<std::size_t, std::size_t>> cells;
    double sum = 0.0;
    for (const RunScore& r : m.runs) {
      cells.insert({r.repeat, r.fold});
      sum += r.auroc;
      CHECK(r.auroc >= 0.0);
      CHECK(r.auroc <= 1.0);
      CHECK(r.ensemble_size >= 1);
    }
    CHECK(cells.size() == 50);
    const double mean = sum / 50.0;
    CHECK(m.mean_auroc == doctest::Approx(mean).epsilon(1e-14));
    double ss = 0.0;
    for (const RunScore& r : m.runs) ss += (r.auroc - mean) * (r.auroc - mean);
    CHECK(m.std_auroc == doctest::Approx(std::sqrt(ss / 49.0)).epsilon(1e-12));
    CHECK(m.roc.points.size() >= 2);
  }
}

TEST_CASE("run_experiment: output does not depend on the worker count") {
  const ExperimentConfig cfg = tiny_config(2, 3);
  const std::string one = report_to_json(run_experiment(cfg, 1)).dump();
  const std::string three = report_to_json(run_experiment(cfg, 3)).dump();
  CHECK(one == three);
}

TEST_CASE("run_experiment: a broken dataset is reported, not fatal") {
  ExperimentConfig cfg = tiny_config(1, 2);
  DatasetSource missing;
  missing.name = "missing";
  missing.path = "/nonexistent/missing.dat";
  cfg.datasets.push_back(missing);
  const ExperimentReport report = run_experiment(cfg, 1);
  REQUIRE(report.datasets.size() == 2);
  CHECK(report.datasets[0].error.empty());
  CHECK_FALSE(report.datasets[1].error.empty());
}

TEST_CASE("table marks every cell tied for the row best at two decimals") {
  ExperimentReport report;
  DatasetResult a;
  a.dataset = "a";
  a.methods = {fake_method("x", 0.951), fake_method("y", 0.949), fake_method("z", 0.90)};
  DatasetResult b;
  b.dataset = "b";
  b.methods = {fake_method("x", 0.80), fake_method("y", 0.85), fake_method("z", 0.70)};
  report.datasets = {a, b};
  const std::string table = render_table(report);
  CHECK(table.find("0.95*") != std::string::npos);
  CHECK(table.find("0.90*") == std::string::npos);
  CHECK(table.find("0.85*") != std::string::npos);
  CHECK(table.find("0.80*") == std::string::npos);
  std::size_t stars = 0;
  for (char c : table) stars += c == '*' ? 1 : 0;
  CHECK(stars == 3);
}
