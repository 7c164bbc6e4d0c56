#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "meboost/baselines.hpp"
#include "support.hpp"

using namespace meboost;

namespace {

Dataset blocks(std::size_t negatives, std::size_t positives, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x((negatives + positives) * p);
  std::vector<int> y(negatives + positives, 0);
  for (auto& v : x) v = g(rng);
  for (std::size_t i = negatives; i < y.size(); ++i) {
    y[i] = 1;
    x[i * p] += 3.0;
  }
  return testing::make_dataset(std::move(x), p, y);
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) s += (a[f] - b[f]) * (a[f] - b[f]);
  return s;
}

// True when x = a + u (b - a) for some u in [0, 1].
bool on_segment(std::span<const double> x, std::span<const double> a, std::span<const double> b) {
  double u = -1.0;
  for (std::size_t f = 0; f < x.size(); ++f) {
    const double span = b[f] - a[f];
    if (std::abs(span) > 1e-12) {
      const double here = (x[f] - a[f]) / span;
      if (u < 0.0) u = here;
      else if (std::abs(here - u) > 1e-9) return false;
    } else if (std::abs(x[f] - a[f]) > 1e-12) {
      return false;
    }
  }
  return u < 0.0 || (u >= -1e-12 && u <= 1.0 + 1e-12);
}

}  // namespace

TEST_CASE("random undersampling balances the classes") {
  SamplerConfig cfg;
  cfg.method = SamplingMethod::random_undersample;
  {
    const Dataset d = blocks(90, 10, 2, 1);
    const RoundSample s = random_undersample(d, std::vector<double>(100, 0.01), cfg);
    CHECK(s.data.count(Label::negative) == 10);
    CHECK(s.data.count(Label::positive) == 10);
    CHECK(std::accumulate(s.weights.begin(), s.weights.end(), 0.0) == doctest::Approx(1.0));
    for (double w : s.weights) CHECK(w == doctest::Approx(0.05));
  }
  {
    const Dataset d = blocks(82, 2, 1, 2);
    const RoundSample s = random_undersample(d, std::vector<double>(84, 1.0 / 84), cfg);
    CHECK(s.data.count(Label::negative) == 2);
    CHECK(s.data.count(Label::positive) == 2);
  }
  {
    cfg.target_ratio = 2.5;
    const Dataset d = blocks(90, 10, 1, 3);
    const RoundSample s = random_undersample(d, std::vector<double>(100, 0.01), cfg);
    CHECK(s.data.count(Label::negative) == 25);
    CHECK(s.data.count(Label::positive) == 10);
  }
}

TEST_CASE("undersampling keeps weights attached to their rows") {
  const Dataset d = blocks(30, 5, 1, 4);
  std::vector<double> w(d.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(i + 1);
  SamplerConfig cfg;
  cfg.seed = 9;
  const RoundSample s = random_undersample(d, w, cfg);
  double total = 0.0;
  for (auto id : s.data.ids()) total += w[id];
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    CHECK(s.weights[i] == doctest::Approx(w[s.data.ids()[i]] / total));
  }
}

TEST_CASE("SMOTE generates the missing positives on neighbour segments") {
  const Dataset d = blocks(20, 5, 2, 5);
  SamplerConfig cfg;
  cfg.method = SamplingMethod::smote;
  cfg.smote_k = 2;
  cfg.seed = 13;
  const Dataset out = smote(d, cfg);
  REQUIRE(out.size() == 40);
  CHECK(out.count(Label::positive) == 20);
  CHECK(out.count(Label::negative) == 20);

  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.label(i) == Label::positive) pos.push_back(i);
  // Oracle neighbour lists by brute force.
  std::vector<std::vector<std::size_t>> nn(pos.size());
  for (std::size_t a = 0; a < pos.size(); ++a) {
    std::vector<std::size_t> others;
    for (std::size_t b = 0; b < pos.size(); ++b)
      if (b != a) others.push_back(b);
    std::stable_sort(others.begin(), others.end(), [&](std::size_t l, std::size_t r) {
      return sq_dist(d.row(pos[a]), d.row(pos[l])) < sq_dist(d.row(pos[a]), d.row(pos[r]));
    });
    nn[a].assign(others.begin(), others.begin() + 2);
  }

  for (std::size_t i = d.size(); i < out.size(); ++i) {
    CHECK(out.label(i) == Label::positive);
    CHECK((out.ids()[i] & kSyntheticIdFlag) != 0);
    bool found = false;
    for (std::size_t a = 0; a < pos.size() && !found; ++a)
      for (std::size_t b : nn[a]) found = found || on_segment(out.row(i), d.row(pos[a]), d.row(pos[b]));
    CHECK(found);
  }
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(out.ids()[i] == d.ids()[i]);
}

TEST_CASE("SMOTE on duplicate positives copies them") {
  const Dataset d = testing::make_dataset({0, 0, 0, 0, 0, 0, 1, 1, 1, 1}, 1, {0, 0, 0, 0, 0, 0, 1, 1, 1, 1});
  SamplerConfig cfg;
  cfg.smote_k = 2;
  const Dataset out = smote(d, cfg);
  CHECK(out.size() == 12);
  for (std::size_t i = d.size(); i < out.size(); ++i) CHECK(out.value(i, 0) == 1.0);
}

TEST_CASE("SMOTE preconditions and determinism") {
  const Dataset few = blocks(20, 3, 1, 6);
  SamplerConfig cfg;
  cfg.smote_k = 3;
  CHECK_THROWS_AS(smote(few, cfg), InvalidArgument);
  cfg.smote_k = 2;
  CHECK(smote(few, cfg).features() == smote(few, cfg).features());
  cfg.target_ratio = 0.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("SMOTE round sampler weights synthetic rows as one training instance") {
  const Dataset d = blocks(20, 5, 2, 7);
  SamplerConfig cfg;
  cfg.method = SamplingMethod::smote;
  cfg.smote_k = 2;
  const RoundSampler sampler = make_round_sampler(cfg);
  const BoostState state = init_weights(d.size());
  const RoundSample s = sampler(d, state, 3);
  REQUIRE(s.data.size() == 40);
  const double total = 1.0 + 15.0 / 25.0;
  for (std::size_t i = 0; i < s.data.size(); ++i) CHECK(s.weights[i] == doctest::Approx((1.0 / 25.0) / total));
  CHECK_FALSE(make_round_sampler(SamplerConfig{}));
}

TEST_CASE("single-kind AdaBoost uses only its learner kind") {
  std::mt19937_64 rng(31);
  const Dataset all = testing::random_dataset(rng, 200, 3, 0.2, 0.05);
  const Partition p = stratified_holdout(all, 0.2, 3);
  MEBoostConfig cfg;
  cfg.seed = 8;
  cfg.max_rounds = 30;
  for (LearnerKind kind : {LearnerKind::decision_tree, LearnerKind::extra_tree}) {
    for (SamplingMethod m : {SamplingMethod::none, SamplingMethod::random_undersample, SamplingMethod::smote}) {
      SamplerConfig sampler;
      sampler.method = m;
      const auto r = train_adaboost_single(p.train, p.test, kind, sampler, cfg);
      CHECK(r.best_model.size() >= 1);
      for (const auto& rec : r.best_model.records()) CHECK(rec.kind == kind);
      for (const auto& e : r.score_trajectory) CHECK(e.kind == kind);
      CHECK(r.best_score >= 0.5);
    }
  }
}
