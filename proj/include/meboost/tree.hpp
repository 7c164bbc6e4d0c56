#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meboost/common.hpp"
#include "meboost/dataset.hpp"

namespace meboost {

/// Flat tree node. Internal nodes route x left iff x[feature] <= threshold.
/// `mass` is the normalized training weight per class, indexed by Label.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  Label prediction = Label::negative;
  std::array<double, 2> mass{};

  bool is_leaf() const { return feature < 0; }
};

struct TrainConfig {
  std::size_t max_depth = 8;
  /// Minimum child weight in normalized units (weights summing to 1).
  /// Unset means 1/|D|, the weight of one instance under uniform weights.
  std::optional<double> min_leaf_weight;
  /// Candidate features per extra-tree node; 0 means ceil(sqrt(n_features)).
  std::size_t extra_tree_feature_count = 0;
  std::uint64_t seed = 0;
};

class TreeModel {
 public:
  TreeModel() = default;
  TreeModel(LearnerKind kind, std::vector<TreeNode> nodes, std::size_t n_features,
            std::size_t max_depth, double min_leaf_weight, std::uint64_t seed);

  Label predict(std::span<const double> x) const;
  std::vector<Label> predict(const Dataset& d) const;

  LearnerKind kind() const { return kind_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t n_features() const { return n_features_; }
  std::size_t max_depth() const { return max_depth_; }
  double min_leaf_weight() const { return min_leaf_weight_; }
  std::uint64_t seed() const { return seed_; }

  /// Number of internal nodes on the longest root-to-leaf path.
  std::size_t depth() const;
  std::size_t leaf_count() const;

  /// Nested JSON text: {"type":"internal","feature":..,"threshold":..,
  /// "left":{..},"right":{..}} / {"type":"leaf","prediction":..,"mass":[neg,pos]},
  /// wrapped with the learner metadata.
  std::string to_json() const;
  static TreeModel from_json(const std::string& text);

  friend bool operator==(const TreeModel& a, const TreeModel& b);

 private:
  LearnerKind kind_ = LearnerKind::decision_tree;
  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
  std::size_t max_depth_ = 0;
  double min_leaf_weight_ = 0.0;
  std::uint64_t seed_ = 0;
};

bool operator==(const TreeNode& a, const TreeNode& b);

/// Binary entropy in bits of (negative mass, positive mass).
/// Throws InvalidArgument when both masses are zero or either is negative.
double weighted_entropy(double negative_mass, double positive_mass);

/// Information gain of splitting `parent` into `left` and `right`
/// (each indexed by Label). Children with zero mass contribute nothing.
double information_gain(const std::array<double, 2>& parent, const std::array<double, 2>& left,
                        const std::array<double, 2>& right);

/// Exhaustive entropy-gain tree. Candidate thresholds are midpoints between
/// consecutive distinct values; ties go to the lowest feature index, then the
/// smallest threshold.
TreeModel train_decision_tree(const Dataset& d, std::span<const double> weights,
                              const TrainConfig& cfg);

/// Extremely randomized tree. Per node, draws the configured number of
/// features without replacement and one uniform threshold per feature in
/// [min, max) of the node's values; keeps the highest-gain candidate.
TreeModel train_extra_tree(const Dataset& d, std::span<const double> weights,
                           const TrainConfig& cfg);

TreeModel train_tree(LearnerKind kind, const Dataset& d, std::span<const double> weights,
                     const TrainConfig& cfg);

}  // namespace meboost
