#include "meboost/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "meboost/serialization.hpp"

namespace meboost {

namespace {

// Gains closer than this are treated as equal; a best gain at or below it
// means no useful split exists.
constexpr double kGainTolerance = 1e-12;

std::size_t cls(Label label) { return static_cast<std::size_t>(label); }

Label majority(const std::array<double, 2>& mass) {
  return mass[cls(Label::positive)] > mass[cls(Label::negative)] ? Label::positive
                                                                 : Label::negative;
}

double entropy_or_zero(const std::array<double, 2>& mass) {
  const double total = mass[0] + mass[1];
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (const double m : mass) {
    if (m > 0.0) {
      const double p = m / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

std::vector<double> normalized_weights(const Dataset& d, std::span<const double> weights) {
  if (d.empty()) throw InvalidArgument("cannot train a tree on an empty dataset");
  if (weights.size() != d.size()) {
    throw InvalidArgument("weight vector length " + std::to_string(weights.size()) +
                          " does not match dataset size " + std::to_string(d.size()));
  }
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("weights sum to zero");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= total;
  return out;
}

double resolve_min_leaf_weight(const TrainConfig& cfg, std::size_t n) {
  const double value = cfg.min_leaf_weight.value_or(1.0 / static_cast<double>(n));
  if (!(value >= 0.0)) throw InvalidArgument("min_leaf_weight must be nonnegative");
  return value;
}

void check_config(const TrainConfig& cfg) {
  if (cfg.max_depth < 1) throw InvalidArgument("max_depth must be at least 1");
}

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double gain = kGainTolerance;

  bool found() const { return feature >= 0; }
};

bool is_pure(const std::array<double, 2>& mass) { return mass[0] <= 0.0 || mass[1] <= 0.0; }

// Normalized masses carry rounding error, so a single row of a uniform
// sample can land a hair under 1/n. Allow for that.
bool below_min_leaf(const std::array<double, 2>& mass, double min_leaf) {
  return mass[0] + mass[1] < min_leaf - 1e-12;
}

// -----------------------------------------------------------------------------
// Decision tree: rows are presorted once per feature; every node owns the
// same [begin, end) range in each feature's order, kept sorted by stable
// partitioning on the way down.

class DecisionTreeBuilder {
 public:
  DecisionTreeBuilder(const Dataset& d, std::vector<double> weights, const TrainConfig& cfg)
      : d_(d),
        w_(std::move(weights)),
        max_depth_(cfg.max_depth),
        min_leaf_(resolve_min_leaf_weight(cfg, d.size())),
        go_left_(d.size(), 0) {
    const std::size_t n = d.size();
    sorted_.resize(d.n_features());
    for (std::size_t f = 0; f < d.n_features(); ++f) {
      auto& order = sorted_[f];
      order.resize(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.value(a, f) < d.value(b, f);
      });
    }
  }

  TreeModel build() {
    build_node(0, d_.size(), 0);
    return TreeModel(LearnerKind::decision_tree, std::move(nodes_), d_.n_features(), max_depth_,
                     min_leaf_, 0);
  }

 private:
  std::int32_t build_node(std::size_t begin, std::size_t end, std::size_t depth) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    std::array<double, 2> mass{};
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t r = sorted_[0][k];
      mass[cls(d_.label(r))] += w_[r];
    }
    nodes_[index].mass = mass;
    nodes_[index].prediction = majority(mass);
    if (depth >= max_depth_ || is_pure(mass)) return index;

    const Split split = best_split(begin, end, mass);
    if (!split.found()) return index;

    const auto f = static_cast<std::size_t>(split.feature);
    std::size_t n_left = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t r = sorted_[f][k];
      go_left_[r] = d_.value(r, f) <= split.threshold ? 1 : 0;
      n_left += go_left_[r];
    }
    for (auto& order : sorted_) {
      std::stable_partition(order.begin() + static_cast<std::ptrdiff_t>(begin),
                            order.begin() + static_cast<std::ptrdiff_t>(end),
                            [&](std::size_t r) { return go_left_[r] != 0; });
    }
    const std::int32_t left = build_node(begin, begin + n_left, depth + 1);
    const std::int32_t right = build_node(begin + n_left, end, depth + 1);
    auto& node = nodes_[index];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return index;
  }

  Split best_split(std::size_t begin, std::size_t end, const std::array<double, 2>& mass) const {
    Split best;
    for (std::size_t f = 0; f < d_.n_features(); ++f) {
      const auto& order = sorted_[f];
      std::array<double, 2> left{};
      for (std::size_t k = begin; k + 1 < end; ++k) {
        const std::size_t r = order[k];
        left[cls(d_.label(r))] += w_[r];
        const double here = d_.value(r, f);
        const double next = d_.value(order[k + 1], f);
        if (!(here < next)) continue;
        const std::array<double, 2> right{mass[0] - left[0], mass[1] - left[1]};
        if (below_min_leaf(left, min_leaf_) || below_min_leaf(right, min_leaf_)) continue;
        const double gain = information_gain(mass, left, right);
        if (gain > best.gain + (best.found() ? kGainTolerance : 0.0)) {
          double threshold = here + (next - here) / 2.0;
          if (!(threshold < next)) threshold = here;
          best = {static_cast<std::int32_t>(f), threshold, gain};
        }
      }
    }
    return best;
  }

  const Dataset& d_;
  std::vector<double> w_;
  std::size_t max_depth_;
  double min_leaf_;
  std::vector<std::vector<std::size_t>> sorted_;
  std::vector<char> go_left_;
  std::vector<TreeNode> nodes_;
};

// -----------------------------------------------------------------------------
// Extra tree

class ExtraTreeBuilder {
 public:
  ExtraTreeBuilder(const Dataset& d, std::vector<double> weights, const TrainConfig& cfg)
      : d_(d),
        w_(std::move(weights)),
        max_depth_(cfg.max_depth),
        min_leaf_(resolve_min_leaf_weight(cfg, d.size())),
        seed_(cfg.seed),
        rng_(mix_seed(cfg.seed)) {
    const std::size_t p = d.n_features();
    n_candidates_ = cfg.extra_tree_feature_count == 0
                        ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))))
                        : cfg.extra_tree_feature_count;
    if (n_candidates_ > p) {
      throw InvalidArgument("extra_tree_feature_count " + std::to_string(n_candidates_) +
                            " exceeds the number of features " + std::to_string(p));
    }
    features_.resize(p);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
    rows_.resize(d.size());
    std::iota(rows_.begin(), rows_.end(), std::size_t{0});
  }

  TreeModel build() {
    build_node(0, rows_.size(), 0);
    return TreeModel(LearnerKind::extra_tree, std::move(nodes_), d_.n_features(), max_depth_,
                     min_leaf_, seed_);
  }

 private:
  std::int32_t build_node(std::size_t begin, std::size_t end, std::size_t depth) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    std::array<double, 2> mass{};
    for (std::size_t k = begin; k < end; ++k) mass[cls(d_.label(rows_[k]))] += w_[rows_[k]];
    nodes_[index].mass = mass;
    nodes_[index].prediction = majority(mass);
    if (depth >= max_depth_ || is_pure(mass)) return index;

    const Split split = random_split(begin, end, mass);
    if (!split.found()) return index;

    const auto f = static_cast<std::size_t>(split.feature);
    const auto middle = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::size_t r) { return d_.value(r, f) <= split.threshold; });
    const auto mid = static_cast<std::size_t>(middle - rows_.begin());
    const std::int32_t left = build_node(begin, mid, depth + 1);
    const std::int32_t right = build_node(mid, end, depth + 1);
    auto& node = nodes_[index];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return index;
  }

  Split random_split(std::size_t begin, std::size_t end, const std::array<double, 2>& mass) {
    // Partial Fisher-Yates: the first n_candidates_ entries are the draw.
    for (std::size_t i = 0; i < n_candidates_; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, features_.size() - 1);
      std::swap(features_[i], features_[pick(rng_)]);
    }
    Split best;
    for (std::size_t i = 0; i < n_candidates_; ++i) {
      const std::size_t f = features_[i];
      double lo = d_.value(rows_[begin], f);
      double hi = lo;
      for (std::size_t k = begin + 1; k < end; ++k) {
        const double v = d_.value(rows_[k], f);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(lo < hi)) continue;
      std::uniform_real_distribution<double> draw(lo, hi);
      double threshold = draw(rng_);
      if (!(threshold < hi)) threshold = lo;
      std::array<double, 2> left{};
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t r = rows_[k];
        if (d_.value(r, f) <= threshold) left[cls(d_.label(r))] += w_[r];
      }
      const std::array<double, 2> right{mass[0] - left[0], mass[1] - left[1]};
      if (below_min_leaf(left, min_leaf_) || below_min_leaf(right, min_leaf_)) continue;
      const double gain = information_gain(mass, left, right);
      if (gain > best.gain + (best.found() ? kGainTolerance : 0.0)) {
        best = {static_cast<std::int32_t>(f), threshold, gain};
      }
    }
    return best;
  }

  const Dataset& d_;
  std::vector<double> w_;
  std::size_t max_depth_;
  double min_leaf_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::size_t n_candidates_ = 1;
  std::vector<std::size_t> features_;
  std::vector<std::size_t> rows_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

double weighted_entropy(double negative_mass, double positive_mass) {
  if (negative_mass < 0.0 || positive_mass < 0.0) throw InvalidArgument("class masses must be nonnegative");
  if (negative_mass + positive_mass <= 0.0) throw InvalidArgument("both class masses are zero");
  return entropy_or_zero({negative_mass, positive_mass});
}

double information_gain(const std::array<double, 2>& parent, const std::array<double, 2>& left,
                        const std::array<double, 2>& right) {
  const double total = parent[0] + parent[1];
  const double wl = left[0] + left[1];
  const double wr = right[0] + right[1];
  return entropy_or_zero(parent) - (wl / total) * entropy_or_zero(left) -
         (wr / total) * entropy_or_zero(right);
}

TreeModel::TreeModel(LearnerKind kind, std::vector<TreeNode> nodes, std::size_t n_features,
                     std::size_t max_depth, double min_leaf_weight, std::uint64_t seed)
    : kind_(kind),
      nodes_(std::move(nodes)),
      n_features_(n_features),
      max_depth_(max_depth),
      min_leaf_weight_(min_leaf_weight),
      seed_(seed) {
  if (nodes_.empty()) throw InvalidArgument("tree has no nodes");
}

Label TreeModel::predict(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw InvalidArgument("feature vector has " + std::to_string(x.size()) + " values, tree expects " +
                          std::to_string(n_features_));
  }
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    node = &nodes_[static_cast<std::size_t>(
        x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right)];
  }
  return node->prediction;
}

std::vector<Label> TreeModel::predict(const Dataset& d) const {
  std::vector<Label> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(predict(d.row(i)));
  return out;
}

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  // Children are always stored after their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    if (node.is_leaf()) {
      deepest = std::max(deepest, level[i]);
    } else {
      level[static_cast<std::size_t>(node.left)] = level[i] + 1;
      level[static_cast<std::size_t>(node.right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::string TreeModel::to_json() const { return tree_to_json(*this).dump(); }

TreeModel TreeModel::from_json(const std::string& text) {
  return tree_from_json(nlohmann::json::parse(text));
}

bool operator==(const TreeNode& a, const TreeNode& b) {
  return a.feature == b.feature && a.threshold == b.threshold && a.left == b.left &&
         a.right == b.right && a.prediction == b.prediction && a.mass == b.mass;
}

bool operator==(const TreeModel& a, const TreeModel& b) {
  return a.kind_ == b.kind_ && a.n_features_ == b.n_features_ && a.max_depth_ == b.max_depth_ &&
         a.min_leaf_weight_ == b.min_leaf_weight_ && a.seed_ == b.seed_ && a.nodes_ == b.nodes_;
}

TreeModel train_decision_tree(const Dataset& d, std::span<const double> weights,
                              const TrainConfig& cfg) {
  check_config(cfg);
  return DecisionTreeBuilder(d, normalized_weights(d, weights), cfg).build();
}

TreeModel train_extra_tree(const Dataset& d, std::span<const double> weights,
                           const TrainConfig& cfg) {
  check_config(cfg);
  return ExtraTreeBuilder(d, normalized_weights(d, weights), cfg).build();
}

TreeModel train_tree(LearnerKind kind, const Dataset& d, std::span<const double> weights,
                     const TrainConfig& cfg) {
  return kind == LearnerKind::decision_tree ? train_decision_tree(d, weights, cfg)
                                            : train_extra_tree(d, weights, cfg);
}

}  // namespace meboost
