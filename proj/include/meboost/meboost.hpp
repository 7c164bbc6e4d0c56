#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "meboost/boost_core.hpp"
#include "meboost/dataset.hpp"
#include "meboost/tree.hpp"

namespace meboost {

struct MEBoostConfig {
  /// Stagnation window: consecutive non-improving rounds before stopping.
  std::size_t window = 10;
  std::size_t max_rounds = 200;
  /// A holdout score must exceed the best by more than this to count.
  double improvement_epsilon = 0.0;
  LearnerKind first_kind = LearnerKind::decision_tree;
  TrainConfig tree;
  std::uint64_t seed = 0;
  /// Retries after a rejected learner before the round is skipped.
  std::size_t max_retries = 5;

  void validate() const;
};

struct TrajectoryEntry {
  std::size_t round = 0;
  double auroc = 0.0;
  LearnerKind kind = LearnerKind::decision_tree;
};

struct MEBoostResult {
  EnsembleModel best_model;
  double best_score = 0.0;
  /// Round at which best_model was completed.
  std::size_t best_round = 0;
  /// Rounds attempted, skipped ones included.
  std::size_t rounds_trained = 0;
  std::size_t skipped_rounds = 0;
  std::vector<TrajectoryEntry> score_trajectory;
};

/// first_kind on odd rounds, the other kind on even rounds. `round` >= 1.
LearnerKind select_kind(std::size_t round, const MEBoostConfig& cfg);

/// Holdout score of the ensemble after an accepted round. The ensemble only
/// grows between calls within one run.
using HoldoutScorer = std::function<double(const EnsembleModel&)>;

/// auROC of the ensemble margins on `holdout`. Margins are cached and only
/// the newly appended learners are evaluated on each call.
HoldoutScorer make_auroc_scorer(const Dataset& holdout);

/// Training data for one round's learner.
struct RoundSample {
  Dataset data;
  std::vector<double> weights;
};

/// Produces the round's training sample from the full training set and the
/// current weights. Error, alpha and the weight update always use the full
/// training set.
using RoundSampler =
    std::function<RoundSample(const Dataset& train, const BoostState& state, std::uint64_t seed)>;

/// How a boosting run picks its learners.
struct BoostingPlan {
  std::function<LearnerKind(std::size_t round)> kind_for_round;
  /// On rejection of a deterministic decision tree, retry with the other
  /// kind. Without this a rejected decision tree is only retried when a
  /// sampler can change its training data.
  bool switch_kind_on_reject = false;
  RoundSampler sampler;
};

/// Shared AdaBoost loop with holdout tracking and the stagnation window.
/// Returns the best-scoring prefix of the ensemble, never simply the last.
/// Throws TrainingError("no weak learner found") if no round was accepted.
MEBoostResult run_boosting(const Dataset& train, const BoostingPlan& plan,
                           const HoldoutScorer& scorer, const MEBoostConfig& cfg);

/// Throws InvalidArgument if the datasets share an instance id.
void check_disjoint(const Dataset& a, const Dataset& b);

/// MEBoost: alternating decision tree / extra tree rounds scored on `holdout`.
MEBoostResult train_meboost(const Dataset& train, const Dataset& holdout, const MEBoostConfig& cfg);

/// Same driver with a caller-supplied scorer.
MEBoostResult train_meboost(const Dataset& train, const HoldoutScorer& scorer,
                            const MEBoostConfig& cfg);

/// CSV with header `round,kind,holdout_auroc`.
void write_trajectory_csv(const std::vector<TrajectoryEntry>& trajectory, std::ostream& out);

}  // namespace meboost
