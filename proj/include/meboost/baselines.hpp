#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "meboost/dataset.hpp"
#include "meboost/meboost.hpp"

namespace meboost {

enum class SamplingMethod { none, random_undersample, smote };

std::string_view to_string(SamplingMethod method);
SamplingMethod sampling_method_from_string(std::string_view text);

struct SamplerConfig {
  SamplingMethod method = SamplingMethod::none;
  /// Majority:minority ratio after sampling.
  double target_ratio = 1.0;
  std::size_t smote_k = 5;
  std::uint64_t seed = 0;
  /// Min-max scale features before SMOTE neighbour search.
  bool scale_features = false;

  void validate() const;
};

/// Instance ids of synthetic rows have this bit set.
inline constexpr std::uint64_t kSyntheticIdFlag = std::uint64_t{1} << 63;

/// Drops uniformly chosen negative (majority) rows until
/// negatives / positives = target_ratio, rounded to the nearest count.
/// Surviving weights are renormalized to sum 1. Input returned unchanged if
/// the ratio is already at or below target.
RoundSample random_undersample(const Dataset& d, std::span<const double> weights,
                               const SamplerConfig& cfg);

/// Appends synthetic positive rows x + u (z - x), with x a random positive
/// row, z one of its smote_k nearest positive neighbours (Euclidean) and
/// u ~ U[0,1], until negatives / positives = target_ratio.
/// Throws InvalidArgument when the positive count does not exceed smote_k.
Dataset smote(const Dataset& d, const SamplerConfig& cfg);

/// Per-round sampler for the boosting driver. SMOTE rows get weight
/// 1/|train| before renormalization; original rows keep their boosting weight.
RoundSampler make_round_sampler(const SamplerConfig& cfg);

/// AdaBoost with a single learner kind, optionally resampling the learner's
/// training data every round (RUSBoost / SMOTEBoost). Same stopping rule as
/// MEBoost.
MEBoostResult train_adaboost_single(const Dataset& train, const Dataset& holdout, LearnerKind kind,
                                    const SamplerConfig& sampler, const MEBoostConfig& cfg);
MEBoostResult train_adaboost_single(const Dataset& train, const HoldoutScorer& scorer,
                                    LearnerKind kind, const SamplerConfig& sampler,
                                    const MEBoostConfig& cfg);

}  // namespace meboost
