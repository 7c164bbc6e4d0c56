#include "doctest.h"

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>

#include "meboost/meboost.hpp"
#include "meboost/metrics.hpp"
#include "meboost/serialization.hpp"
#include "support.hpp"

using namespace meboost;

namespace {

// Scores the k-th accepted round with trajectory[k], repeating the last value.
HoldoutScorer fixed_trajectory(std::vector<double> trajectory) {
  auto calls = std::make_shared<std::size_t>(0);
  return [trajectory = std::move(trajectory), calls](const EnsembleModel&) {
    const std::size_t k = std::min(*calls, trajectory.size() - 1);
    ++*calls;
    return trajectory[k];
  };
}

Dataset noisy_train() {
  std::mt19937_64 rng(101);
  return testing::random_dataset(rng, 80, 3, 0.3, 0.15);
}

MEBoostConfig shallow(std::size_t window) {
  MEBoostConfig cfg;
  cfg.window = window;
  cfg.max_rounds = 50;
  cfg.tree.max_depth = 2;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("stops W rounds after the last improvement and keeps the best prefix") {
  const Dataset train = noisy_train();
  const auto r = train_meboost(train, fixed_trajectory({0.7, 0.9, 0.85}), shallow(2));
  CHECK(r.skipped_rounds == 0);
  CHECK(r.rounds_trained == 4);
  CHECK(r.best_model.size() == 2);
  CHECK(r.best_round == 2);
  CHECK(r.best_score == 0.9);
  CHECK(r.score_trajectory.size() == 4);

  const auto r1 = train_meboost(train, fixed_trajectory({0.7, 0.9, 0.85}), shallow(1));
  CHECK(r1.rounds_trained == 3);
  CHECK(r1.best_model.size() == 2);
}

TEST_CASE("ties do not count as improvement and epsilon raises the bar") {
  const Dataset train = noisy_train();
  const auto flat = train_meboost(train, fixed_trajectory({0.8}), shallow(3));
  CHECK(flat.best_model.size() == 1);
  CHECK(flat.rounds_trained == 4);

  MEBoostConfig cfg = shallow(3);
  cfg.improvement_epsilon = 0.1;
  const auto r = train_meboost(train, fixed_trajectory({0.7, 0.75, 0.79, 0.85, 0.86}), cfg);
  CHECK(r.best_model.size() == 4);
  CHECK(r.rounds_trained == 7);
}

TEST_CASE("a steadily improving holdout runs to the round cap") {
  std::vector<double> rising;
  for (int i = 0; i < 100; ++i) rising.push_back(0.5 + 0.004 * i);
  MEBoostConfig cfg = shallow(2);
  cfg.max_rounds = 12;
  const auto r = train_meboost(noisy_train(), fixed_trajectory(rising), cfg);
  CHECK(r.rounds_trained == 12);
  CHECK(r.best_model.size() == 12 - r.skipped_rounds);
}

TEST_CASE("learners alternate between the two kinds") {
  MEBoostConfig cfg = shallow(8);
  cfg.max_rounds = 8;
  CHECK(select_kind(1, cfg) == LearnerKind::decision_tree);
  CHECK(select_kind(2, cfg) == LearnerKind::extra_tree);
  std::vector<double> rising;
  for (int i = 0; i < 20; ++i) rising.push_back(0.1 * i);
  const auto r = train_meboost(noisy_train(), fixed_trajectory(rising), cfg);
  REQUIRE(r.skipped_rounds == 0);
  for (const auto& e : r.score_trajectory) {
    CHECK(e.kind == (e.round % 2 == 1 ? LearnerKind::decision_tree : LearnerKind::extra_tree));
  }
  for (std::size_t i = 0; i < r.best_model.size(); ++i) {
    CHECK(r.best_model.records()[i].kind == (i % 2 == 0 ? LearnerKind::decision_tree : LearnerKind::extra_tree));
  }
  cfg.first_kind = LearnerKind::extra_tree;
  CHECK(select_kind(1, cfg) == LearnerKind::extra_tree);
  CHECK(select_kind(2, cfg) == LearnerKind::decision_tree);
}

TEST_CASE("holdout training is deterministic and the reported score is reproducible") {
  std::mt19937_64 rng(44);
  const Dataset all = testing::random_dataset(rng, 150, 4, 0.2, 0.1);
  const Partition p = stratified_holdout(all, 0.2, 1);
  MEBoostConfig cfg;
  cfg.seed = 77;
  const auto a = train_meboost(p.train, p.test, cfg);
  const auto b = train_meboost(p.train, p.test, cfg);
  CHECK(ensemble_to_json(a.best_model) == ensemble_to_json(b.best_model));
  CHECK(a.best_score == b.best_score);
  CHECK(a.best_model.size() <= a.score_trajectory.size());
  CHECK(auroc(ensemble_scores(a.best_model, p.test), p.test.labels()) == doctest::Approx(a.best_score).epsilon(1e-12));
  CHECK_THROWS_AS(train_meboost(p.train, p.train, cfg), InvalidArgument);
}

TEST_CASE("config validation and trajectory csv") {
  MEBoostConfig cfg;
  cfg.window = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  std::ostringstream out;
  write_trajectory_csv({{1, 0.5, LearnerKind::decision_tree}}, out);
  CHECK(out.str().rfind("round,kind,holdout_auroc\n1,", 0) == 0);
}
