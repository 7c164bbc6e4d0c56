#include "meboost/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace meboost {

std::string_view to_string(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::none:
      return "none";
    case SamplingMethod::random_undersample:
      return "random_undersample";
    case SamplingMethod::smote:
      return "smote";
  }
  return "none";
}

SamplingMethod sampling_method_from_string(std::string_view text) {
  if (text == "none") return SamplingMethod::none;
  if (text == "random_undersample") return SamplingMethod::random_undersample;
  if (text == "smote") return SamplingMethod::smote;
  throw InvalidArgument("unknown sampling method '" + std::string(text) + "'");
}

void SamplerConfig::validate() const {
  if (!(target_ratio >= 1.0)) throw InvalidArgument("target_ratio must be at least 1");
  if (smote_k < 1) throw InvalidArgument("smote_k must be at least 1");
}

RoundSample random_undersample(const Dataset& d, std::span<const double> weights,
                               const SamplerConfig& cfg) {
  cfg.validate();
  if (weights.size() != d.size()) throw InvalidArgument("weight vector does not match dataset size");
  std::vector<std::size_t> majority;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d.size(); ++i) {
    (d.label(i) == Label::negative ? majority : keep).push_back(i);
  }
  const auto target = static_cast<std::size_t>(
      std::llround(cfg.target_ratio * static_cast<double>(keep.size())));
  if (majority.size() <= target) {
    return {d, std::vector<double>(weights.begin(), weights.end())};
  }
  std::mt19937_64 rng(mix_seed(cfg.seed));
  std::shuffle(majority.begin(), majority.end(), rng);
  keep.insert(keep.end(), majority.begin(), majority.begin() + static_cast<std::ptrdiff_t>(target));
  std::sort(keep.begin(), keep.end());

  std::vector<double> kept_weights;
  kept_weights.reserve(keep.size());
  double total = 0.0;
  for (const std::size_t i : keep) {
    kept_weights.push_back(weights[i]);
    total += weights[i];
  }
  if (!(total > 0.0)) throw InvalidArgument("surviving rows carry no weight");
  for (double& w : kept_weights) w /= total;
  return {d.subset(keep), std::move(kept_weights)};
}

Dataset smote(const Dataset& d, const SamplerConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.label(i) == Label::positive) minority.push_back(i);
  }
  if (minority.size() <= cfg.smote_k) {
    throw InvalidArgument("SMOTE needs more than k = " + std::to_string(cfg.smote_k) +
                          " minority instances, found " + std::to_string(minority.size()));
  }
  const std::size_t n_majority = d.size() - minority.size();
  const auto wanted = std::llround(static_cast<double>(n_majority) / cfg.target_ratio);
  if (wanted <= static_cast<long long>(minority.size())) return d;
  const auto n_synthetic = static_cast<std::size_t>(wanted) - minority.size();

  const std::size_t p = d.n_features();
  std::vector<double> scale(p, 1.0);
  if (cfg.scale_features) {
    for (std::size_t f = 0; f < p; ++f) {
      double lo = d.value(0, f);
      double hi = lo;
      for (std::size_t i = 1; i < d.size(); ++i) {
        lo = std::min(lo, d.value(i, f));
        hi = std::max(hi, d.value(i, f));
      }
      scale[f] = hi > lo ? 1.0 / (hi - lo) : 1.0;
    }
  }

  // k nearest minority neighbours of each minority row; ties by row order.
  const std::size_t m = minority.size();
  std::vector<std::vector<std::size_t>> neighbours(m);
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t a = 0; a < m; ++a) {
    dist.clear();
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      double sq = 0.0;
      for (std::size_t f = 0; f < p; ++f) {
        const double delta = (d.value(minority[a], f) - d.value(minority[b], f)) * scale[f];
        sq += delta * delta;
      }
      dist.emplace_back(sq, b);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(cfg.smote_k), dist.end());
    for (std::size_t j = 0; j < cfg.smote_k; ++j) neighbours[a].push_back(dist[j].second);
  }

  std::mt19937_64 rng(mix_seed(cfg.seed));
  std::uniform_int_distribution<std::size_t> pick_row(0, m - 1);
  std::uniform_int_distribution<std::size_t> pick_neighbour(0, cfg.smote_k - 1);
  std::uniform_real_distribution<double> gap(0.0, 1.0);
  std::vector<double> features;
  features.reserve(n_synthetic * p);
  for (std::size_t s = 0; s < n_synthetic; ++s) {
    const std::size_t a = pick_row(rng);
    const std::size_t b = neighbours[a][pick_neighbour(rng)];
    const double u = gap(rng);
    const auto x = d.row(minority[a]);
    const auto z = d.row(minority[b]);
    for (std::size_t f = 0; f < p; ++f) features.push_back(x[f] + u * (z[f] - x[f]));
  }
  const std::vector<Label> labels(n_synthetic, Label::positive);
  std::vector<std::uint64_t> ids(n_synthetic);
  for (std::size_t s = 0; s < n_synthetic; ++s) ids[s] = kSyntheticIdFlag | s;
  return d.with_rows(features, labels, ids);
}

RoundSampler make_round_sampler(const SamplerConfig& cfg) {
  cfg.validate();
  switch (cfg.method) {
    case SamplingMethod::none:
      return {};
    case SamplingMethod::random_undersample:
      return [cfg](const Dataset& train, const BoostState& state, std::uint64_t seed) {
        SamplerConfig round_cfg = cfg;
        round_cfg.seed = derive_seed(cfg.seed, seed);
        return random_undersample(train, state.weights, round_cfg);
      };
    case SamplingMethod::smote:
      return [cfg](const Dataset& train, const BoostState& state, std::uint64_t seed) {
        SamplerConfig round_cfg = cfg;
        round_cfg.seed = derive_seed(cfg.seed, seed);
        Dataset sampled = smote(train, round_cfg);
        std::vector<double> weights = state.weights;
        weights.resize(sampled.size(), 1.0 / static_cast<double>(train.size()));
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        for (double& w : weights) w /= total;
        return RoundSample{std::move(sampled), std::move(weights)};
      };
  }
  return {};
}

MEBoostResult train_adaboost_single(const Dataset& train, const HoldoutScorer& scorer,
                                    LearnerKind kind, const SamplerConfig& sampler,
                                    const MEBoostConfig& cfg) {
  BoostingPlan plan;
  plan.kind_for_round = [kind](std::size_t) { return kind; };
  plan.switch_kind_on_reject = false;
  plan.sampler = make_round_sampler(sampler);
  return run_boosting(train, plan, scorer, cfg);
}

MEBoostResult train_adaboost_single(const Dataset& train, const Dataset& holdout, LearnerKind kind,
                                    const SamplerConfig& sampler, const MEBoostConfig& cfg) {
  check_disjoint(train, holdout);
  return train_adaboost_single(train, make_auroc_scorer(holdout), kind, sampler, cfg);
}

}  // namespace meboost
