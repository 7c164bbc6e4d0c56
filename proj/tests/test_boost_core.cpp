#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "meboost/boost_core.hpp"
#include "support.hpp"

using namespace meboost;
using meboost::testing::make_dataset;

namespace {

// A fixed tree voting `label` everywhere.
TreeModel constant_tree(Label label) {
  TreeNode leaf;
  leaf.prediction = label;
  return TreeModel(LearnerKind::decision_tree, {leaf}, 1, 1, 0.0, 0);
}

// x <= 0 negative, otherwise positive.
TreeModel sign_tree() {
  TreeNode root;
  root.feature = 0;
  root.threshold = 0.0;
  root.left = 1;
  root.right = 2;
  TreeNode neg;
  TreeNode pos;
  pos.prediction = Label::positive;
  return TreeModel(LearnerKind::decision_tree, {root, neg, pos}, 1, 1, 0.0, 0);
}

WeakLearnerRecord record(TreeModel t, double alpha) {
  WeakLearnerRecord r;
  r.model = std::move(t);
  r.alpha = alpha;
  r.weighted_error = 0.25;
  return r;
}

}  // namespace

TEST_CASE("uniform initial weights") {
  const BoostState s = init_weights(8);
  CHECK(s.round == 0);
  REQUIRE(s.weights.size() == 8);
  for (double w : s.weights) CHECK(w == 0.125);
  CHECK_THROWS_AS(init_weights(0), InvalidArgument);
}

TEST_CASE("weighted error sums the misclassified weight") {
  const Dataset d = make_dataset({1, 2, 3}, 1, {1, 1, 0});
  const std::vector<double> w{0.2, 0.5, 0.3};
  const std::vector<Label> pred{Label::positive, Label::positive, Label::positive};
  CHECK(weighted_error(pred, d, w) == doctest::Approx(0.3));
  BoostState s;
  s.weights = w;
  CHECK(weighted_error(constant_tree(Label::positive), d, s) == doctest::Approx(0.3));
}

TEST_CASE("alpha") {
  CHECK(compute_alpha(0.1) == doctest::Approx(0.5 * std::log(9.0)));
  CHECK(compute_alpha(0.1) == doctest::Approx(1.0986).epsilon(1e-4));
  CHECK(compute_alpha(0.25) == doctest::Approx(0.5 * std::log(3.0)));
  CHECK(compute_alpha(0.25) == doctest::Approx(0.5493).epsilon(1e-4));
  CHECK_THROWS_AS(compute_alpha(0.5), InvalidArgument);
  CHECK_THROWS_AS(compute_alpha(0.0), InvalidArgument);
}

TEST_CASE("weight update on two instances") {
  const Dataset d = make_dataset({-1, 1}, 1, {0, 0});
  const BoostState s = init_weights(2);
  const double alpha = 0.5 * std::log(3.0);
  // sign_tree is right on #1 (x=-1, negative) and wrong on #2.
  const BoostState next = update_weights(s, sign_tree(), alpha, d);
  CHECK(next.weights[0] == doctest::Approx(0.25));
  CHECK(next.weights[1] == doctest::Approx(0.75));
  CHECK(next.round == 1);
}

TEST_CASE("update leaves the learner at error one half") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 10 + trial;
    std::vector<double> x(n);
    std::vector<int> y(n);
    std::vector<Label> pred(n);
    BoostState s;
    s.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i);
      y[i] = static_cast<int>(rng() % 2);
      pred[i] = rng() % 4 == 0 ? testing::lab(1 - y[i]) : testing::lab(y[i]);
      s.weights[i] = u(rng);
    }
    pred[0] = testing::lab(1 - y[0]);
    pred[1] = testing::lab(y[1]);
    const double total = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
    for (double& w : s.weights) w /= total;
    const Dataset d = make_dataset(x, 1, y);
    const double e = weighted_error(pred, d, s.weights);
    if (!(e < 0.5)) continue;
    const BoostState next = update_weights(s, pred, compute_alpha(e), d);
    CHECK(std::accumulate(next.weights.begin(), next.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(weighted_error(pred, d, next.weights) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("gate") {
  CHECK(gate(0.3).accepted());
  CHECK(gate(0.3).effective_error == 0.3);
  CHECK_FALSE(gate(0.5).accepted());
  CHECK_FALSE(gate(0.7).accepted());
  const GateResult zero = gate(0.0);
  CHECK(zero.accepted());
  CHECK(zero.effective_error == kZeroErrorClamp);
  CHECK(std::isfinite(compute_alpha(zero.effective_error)));
}

TEST_CASE("ensemble score is the alpha-weighted vote") {
  EnsembleModel e;
  e.add(record(constant_tree(Label::positive), 1.0));
  e.add(record(constant_tree(Label::negative), 0.5));
  e.add(record(constant_tree(Label::positive), 0.2));
  const std::vector<double> x{0.0};
  CHECK(ensemble_score(e, x) == doctest::Approx(0.7));
  CHECK(ensemble_predict(e, x) == Label::positive);
  CHECK(e.prefix(2).size() == 2);
  CHECK(ensemble_score(e.prefix(2), x) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ensemble_score(EnsembleModel{}, x), InvalidArgument);

  EnsembleModel tied;
  tied.add(record(constant_tree(Label::positive), 0.5));
  tied.add(record(constant_tree(Label::negative), 0.5));
  CHECK(ensemble_predict(tied, x) == Label::negative);
}

TEST_CASE("ensemble scores are additive over records") {
  std::mt19937_64 rng(9);
  const Dataset d = testing::random_dataset(rng, 30, 1, 0.5, 0.0);
  EnsembleModel e;
  for (int k = 0; k < 6; ++k) {
    e.add(record(k % 2 ? sign_tree() : constant_tree(testing::lab(k % 3 == 0)), 0.1 * (k + 1)));
  }
  const auto all = ensemble_scores(e, d);
  const auto head = ensemble_scores(e.prefix(4), d);
  EnsembleModel tail(std::vector<WeakLearnerRecord>(e.records().begin() + 4, e.records().end()));
  const auto rest = ensemble_scores(tail, d);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(all[i] == doctest::Approx(head[i] + rest[i]));
}
