#include "meboost/meboost.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <memory>
#include <ostream>

#include "meboost/metrics.hpp"

namespace meboost {

namespace {

// Seed streams for learners and samplers are kept apart.
constexpr std::uint64_t kLearnerStream = 1;
constexpr std::uint64_t kSamplerStream = 2;

}  // namespace

void check_disjoint(const Dataset& a, const Dataset& b) {
  std::vector<std::uint64_t> ids_a = a.ids();
  std::vector<std::uint64_t> ids_b = b.ids();
  std::sort(ids_a.begin(), ids_a.end());
  std::sort(ids_b.begin(), ids_b.end());
  std::vector<std::uint64_t> common;
  std::set_intersection(ids_a.begin(), ids_a.end(), ids_b.begin(), ids_b.end(),
                        std::back_inserter(common));
  if (!common.empty()) throw InvalidArgument("holdout set shares instances with the training set");
}

void MEBoostConfig::validate() const {
  if (window < 1) throw InvalidArgument("window must be at least 1");
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  if (window > max_rounds) throw InvalidArgument("window must not exceed max_rounds");
  if (!(improvement_epsilon >= 0.0)) throw InvalidArgument("improvement_epsilon must be nonnegative");
  if (tree.max_depth < 1) throw InvalidArgument("max_depth must be at least 1");
}

LearnerKind select_kind(std::size_t round, const MEBoostConfig& cfg) {
  if (round < 1) throw InvalidArgument("rounds are numbered from 1");
  return round % 2 == 1 ? cfg.first_kind : other_kind(cfg.first_kind);
}

HoldoutScorer make_auroc_scorer(const Dataset& holdout) {
  if (!holdout.has_both_classes()) throw InvalidArgument("holdout set must contain both classes");
  struct Cache {
    Dataset data;
    std::vector<double> margins;
    std::size_t seen = 0;
  };
  auto cache = std::make_shared<Cache>(Cache{holdout, std::vector<double>(holdout.size(), 0.0), 0});
  return [cache](const EnsembleModel& e) {
    if (e.size() < cache->seen) {
      std::fill(cache->margins.begin(), cache->margins.end(), 0.0);
      cache->seen = 0;
    }
    for (; cache->seen < e.size(); ++cache->seen) {
      const auto& r = e.records()[cache->seen];
      for (std::size_t i = 0; i < cache->data.size(); ++i) {
        cache->margins[i] += r.alpha * vote(r.model.predict(cache->data.row(i)));
      }
    }
    return auroc(cache->margins, cache->data.labels());
  };
}

MEBoostResult run_boosting(const Dataset& train, const BoostingPlan& plan,
                           const HoldoutScorer& scorer, const MEBoostConfig& cfg) {
  cfg.validate();
  if (!train.has_both_classes()) throw InvalidArgument("training set must contain both classes");
  if (!plan.kind_for_round) throw InvalidArgument("boosting plan has no kind selector");

  BoostState state = init_weights(train.size());
  EnsembleModel ensemble;
  MEBoostResult result;
  result.best_score = -std::numeric_limits<double>::infinity();
  std::size_t best_size = 0;
  std::size_t non_improving = 0;

  for (std::size_t round = 1; round <= cfg.max_rounds; ++round) {
    result.rounds_trained = round;
    const LearnerKind scheduled = plan.kind_for_round(round);

    std::optional<WeakLearnerRecord> accepted;
    std::vector<Label> accepted_predictions;
    LearnerKind kind = scheduled;
    for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      if (attempt > 0 && kind == LearnerKind::decision_tree) {
        if (plan.switch_kind_on_reject) {
          kind = LearnerKind::extra_tree;
        } else if (!plan.sampler) {
          break;  // same data, same deterministic tree
        }
      }
      TrainConfig tree_cfg = cfg.tree;
      tree_cfg.seed = derive_seed(cfg.seed, kLearnerStream, round * 64 + attempt);
      TreeModel model =
          plan.sampler
              ? [&] {
                  const RoundSample sample =
                      plan.sampler(train, state, derive_seed(cfg.seed, kSamplerStream, round * 64 + attempt));
                  return train_tree(kind, sample.data, sample.weights, tree_cfg);
                }()
              : train_tree(kind, train, state.weights, tree_cfg);
      std::vector<Label> predictions = model.predict(train);
      const GateResult verdict = gate(weighted_error(predictions, train, state.weights));
      if (verdict.accepted()) {
        const double alpha = compute_alpha(verdict.effective_error);
        accepted = WeakLearnerRecord{std::move(model), kind, verdict.effective_error, alpha};
        accepted_predictions = std::move(predictions);
        break;
      }
    }

    if (!accepted) {
      ++result.skipped_rounds;
      ++non_improving;
    } else {
      state = update_weights(state, accepted_predictions, accepted->alpha, train);
      const LearnerKind used = accepted->kind;
      ensemble.add(std::move(*accepted));
      const double score = scorer(ensemble);
      result.score_trajectory.push_back({round, score, used});
      if (best_size == 0 || score > result.best_score + cfg.improvement_epsilon) {
        result.best_score = score;
        result.best_round = round;
        best_size = ensemble.size();
        non_improving = 0;
      } else {
        ++non_improving;
      }
    }
    if (non_improving >= cfg.window) break;
  }

  if (best_size == 0) throw TrainingError("no weak learner found");
  result.best_model = ensemble.prefix(best_size);
  return result;
}

MEBoostResult train_meboost(const Dataset& train, const HoldoutScorer& scorer,
                            const MEBoostConfig& cfg) {
  BoostingPlan plan;
  plan.kind_for_round = [cfg](std::size_t round) { return select_kind(round, cfg); };
  plan.switch_kind_on_reject = true;
  return run_boosting(train, plan, scorer, cfg);
}

MEBoostResult train_meboost(const Dataset& train, const Dataset& holdout, const MEBoostConfig& cfg) {
  check_disjoint(train, holdout);
  return train_meboost(train, make_auroc_scorer(holdout), cfg);
}

void write_trajectory_csv(const std::vector<TrajectoryEntry>& trajectory, std::ostream& out) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "round,kind,holdout_auroc\n";
  for (const auto& e : trajectory) out << e.round << ',' << to_string(e.kind) << ',' << e.auroc << '\n';
  out.precision(old_precision);
}

}  // namespace meboost
