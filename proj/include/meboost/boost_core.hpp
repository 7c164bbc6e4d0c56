#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "meboost/dataset.hpp"
#include "meboost/tree.hpp"

namespace meboost {

/// Error used in place of a zero weighted error before computing alpha.
inline constexpr double kZeroErrorClamp = 1e-10;

/// Instance weight distribution of a boosting run. Weights sum to one.
struct BoostState {
  std::vector<double> weights;
  std::size_t round = 0;
};

/// One accepted boosting round.
struct WeakLearnerRecord {
  TreeModel model;
  LearnerKind kind = LearnerKind::decision_tree;
  double weighted_error = 0.0;  // after clamping, so always > 0
  double alpha = 0.0;
};

/// Ordered accepted learners. Scores instances by the alpha-weighted vote.
class EnsembleModel {
 public:
  EnsembleModel() = default;
  explicit EnsembleModel(std::vector<WeakLearnerRecord> records) : records_(std::move(records)) {}

  void add(WeakLearnerRecord record) { records_.push_back(std::move(record)); }

  const std::vector<WeakLearnerRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// Ensemble consisting of the first `n` records.
  EnsembleModel prefix(std::size_t n) const;

 private:
  std::vector<WeakLearnerRecord> records_;
};

/// Uniform weights 1/n at round 0. Throws InvalidArgument for n = 0.
BoostState init_weights(std::size_t n);

/// Sum of the weights of misclassified instances.
double weighted_error(const TreeModel& model, const Dataset& d, const BoostState& state);
double weighted_error(std::span<const Label> predictions, const Dataset& d,
                      std::span<const double> weights);

/// 1/2 ln((1 - error) / error). Requires 0 < error < 0.5.
double compute_alpha(double error);

/// w_i <- w_i exp(-alpha y_i h(x_i)), renormalized. Throws TrainingError if
/// the weights underflow.
BoostState update_weights(const BoostState& state, const TreeModel& model, double alpha,
                          const Dataset& d);
BoostState update_weights(const BoostState& state, std::span<const Label> predictions,
                          double alpha, const Dataset& d);

enum class GateDecision { accept, reject };

struct GateResult {
  GateDecision decision = GateDecision::reject;
  /// Error to feed into compute_alpha; zero is clamped to kZeroErrorClamp.
  double effective_error = 0.0;

  bool accepted() const { return decision == GateDecision::accept; }
};

/// Rejects a learner whose weighted error is 0.5 or worse.
GateResult gate(double error);

/// Sum over records of alpha * vote(x). Throws InvalidArgument when empty.
double ensemble_score(const EnsembleModel& e, std::span<const double> x);
std::vector<double> ensemble_scores(const EnsembleModel& e, const Dataset& d);

/// sign of the score; a zero score is negative.
Label ensemble_predict(const EnsembleModel& e, std::span<const double> x);

}  // namespace meboost
