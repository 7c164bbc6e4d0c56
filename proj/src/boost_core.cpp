#include "meboost/boost_core.hpp"

#include <cmath>
#include <numeric>

namespace meboost {

EnsembleModel EnsembleModel::prefix(std::size_t n) const {
  if (n > records_.size()) throw InvalidArgument("prefix longer than the ensemble");
  return EnsembleModel(std::vector<WeakLearnerRecord>(records_.begin(),
                                                      records_.begin() + static_cast<std::ptrdiff_t>(n)));
}

BoostState init_weights(std::size_t n) {
  if (n == 0) throw InvalidArgument("cannot initialize weights for zero instances");
  return {std::vector<double>(n, 1.0 / static_cast<double>(n)), 0};
}

double weighted_error(std::span<const Label> predictions, const Dataset& d,
                      std::span<const double> weights) {
  if (predictions.size() != d.size() || weights.size() != d.size()) {
    throw InvalidArgument("weights, predictions and dataset differ in size");
  }
  double error = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (predictions[i] != d.label(i)) error += weights[i];
  }
  return error;
}

double weighted_error(const TreeModel& model, const Dataset& d, const BoostState& state) {
  if (state.weights.size() != d.size()) throw InvalidArgument("boost state does not match dataset size");
  return weighted_error(model.predict(d), d, state.weights);
}

double compute_alpha(double error) {
  if (!(error > 0.0 && error < 0.5)) {
    throw InvalidArgument("alpha requires 0 < error < 0.5, got " + std::to_string(error));
  }
  return 0.5 * std::log((1.0 - error) / error);
}

BoostState update_weights(const BoostState& state, std::span<const Label> predictions, double alpha,
                          const Dataset& d) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (state.weights.size() != d.size() || predictions.size() != d.size()) {
    throw InvalidArgument("boost state does not match dataset size");
  }
  const double shrink = std::exp(-alpha);
  const double grow = std::exp(alpha);
  BoostState next{state.weights, state.round + 1};
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    next.weights[i] *= predictions[i] == d.label(i) ? shrink : grow;
    total += next.weights[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw TrainingError("weight normalization underflow");
  for (double& w : next.weights) {
    w /= total;
    if (!(w > 0.0)) throw TrainingError("weight normalization underflow");
  }
  return next;
}

BoostState update_weights(const BoostState& state, const TreeModel& model, double alpha,
                          const Dataset& d) {
  return update_weights(state, model.predict(d), alpha, d);
}

GateResult gate(double error) {
  if (error >= 0.5) return {GateDecision::reject, error};
  return {GateDecision::accept, error <= 0.0 ? kZeroErrorClamp : error};
}

double ensemble_score(const EnsembleModel& e, std::span<const double> x) {
  if (e.empty()) throw InvalidArgument("ensemble is empty");
  double score = 0.0;
  for (const auto& r : e.records()) score += r.alpha * vote(r.model.predict(x));
  return score;
}

std::vector<double> ensemble_scores(const EnsembleModel& e, const Dataset& d) {
  if (e.empty()) throw InvalidArgument("ensemble is empty");
  std::vector<double> scores(d.size(), 0.0);
  for (const auto& r : e.records()) {
    for (std::size_t i = 0; i < d.size(); ++i) scores[i] += r.alpha * vote(r.model.predict(d.row(i)));
  }
  return scores;
}

Label ensemble_predict(const EnsembleModel& e, std::span<const double> x) {
  return ensemble_score(e, x) > 0.0 ? Label::positive : Label::negative;
}

}  // namespace meboost
