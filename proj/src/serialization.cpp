#include "meboost/serialization.hpp"

namespace meboost {

using nlohmann::json;

namespace {

json node_to_json(const std::vector<TreeNode>& nodes, std::size_t index) {
  const TreeNode& node = nodes[index];
  if (node.is_leaf()) {
    return {{"type", "leaf"},
            {"prediction", to_string(node.prediction)},
            {"mass", {node.mass[0], node.mass[1]}}};
  }
  return {{"type", "internal"},
          {"feature", node.feature},
          {"threshold", node.threshold},
          {"mass", {node.mass[0], node.mass[1]}},
          {"left", node_to_json(nodes, static_cast<std::size_t>(node.left))},
          {"right", node_to_json(nodes, static_cast<std::size_t>(node.right))}};
}

std::int32_t node_from_json(const json& j, std::vector<TreeNode>& nodes) {
  const auto index = static_cast<std::int32_t>(nodes.size());
  nodes.emplace_back();
  TreeNode node;
  const auto& mass = j.at("mass");
  node.mass = {mass.at(0).get<double>(), mass.at(1).get<double>()};
  const std::string type = j.at("type").get<std::string>();
  if (type == "leaf") {
    node.prediction = label_from_string(j.at("prediction").get<std::string>());
  } else if (type == "internal") {
    node.feature = j.at("feature").get<std::int32_t>();
    node.threshold = j.at("threshold").get<double>();
    node.prediction = mass.at(1).get<double>() > mass.at(0).get<double>() ? Label::positive
                                                                          : Label::negative;
    node.left = node_from_json(j.at("left"), nodes);
    node.right = node_from_json(j.at("right"), nodes);
  } else {
    throw InvalidArgument("unknown tree node type '" + type + "'");
  }
  nodes[static_cast<std::size_t>(index)] = node;
  return index;
}

}  // namespace

json tree_to_json(const TreeModel& tree) {
  return {{"kind", to_string(tree.kind())},
          {"n_features", tree.n_features()},
          {"max_depth", tree.max_depth()},
          {"min_leaf_weight", tree.min_leaf_weight()},
          {"seed", tree.seed()},
          {"root", node_to_json(tree.nodes(), 0)}};
}

TreeModel tree_from_json(const json& j) {
  std::vector<TreeNode> nodes;
  node_from_json(j.at("root"), nodes);
  return TreeModel(learner_kind_from_string(j.at("kind").get<std::string>()), std::move(nodes),
                   j.at("n_features").get<std::size_t>(), j.at("max_depth").get<std::size_t>(),
                   j.at("min_leaf_weight").get<double>(), j.at("seed").get<std::uint64_t>());
}

json ensemble_to_json(const EnsembleModel& e) {
  json learners = json::array();
  for (const auto& r : e.records()) {
    learners.push_back({{"kind", to_string(r.kind)},
                        {"alpha", r.alpha},
                        {"weighted_error", r.weighted_error},
                        {"tree", tree_to_json(r.model)}});
  }
  return {{"n_rounds", e.size()}, {"learners", std::move(learners)}};
}

EnsembleModel ensemble_from_json(const json& j) {
  EnsembleModel e;
  for (const auto& item : j.at("learners")) {
    e.add({tree_from_json(item.at("tree")), learner_kind_from_string(item.at("kind").get<std::string>()),
           item.at("weighted_error").get<double>(), item.at("alpha").get<double>()});
  }
  return e;
}

json to_json(const TrainConfig& cfg) {
  json j = {{"max_depth", cfg.max_depth},
            {"extra_tree_feature_count", cfg.extra_tree_feature_count}};
  j["min_leaf_weight"] = cfg.min_leaf_weight ? json(*cfg.min_leaf_weight) : json("1/|D|");
  return j;
}

json to_json(const MEBoostConfig& cfg) {
  return {{"window", cfg.window},
          {"max_rounds", cfg.max_rounds},
          {"improvement_epsilon", cfg.improvement_epsilon},
          {"first_kind", to_string(cfg.first_kind)},
          {"max_retries", cfg.max_retries},
          {"seed", cfg.seed},
          {"tree", to_json(cfg.tree)}};
}

json to_json(const SamplerConfig& cfg) {
  return {{"method", to_string(cfg.method)},
          {"target_ratio", cfg.target_ratio},
          {"smote_k", cfg.smote_k},
          {"scale_features", cfg.scale_features}};
}

json to_json(const RocCurve& curve) {
  json fpr = json::array();
  json tpr = json::array();
  for (const auto& p : curve.points) {
    fpr.push_back(p.fpr);
    tpr.push_back(p.tpr);
  }
  return {{"fpr", std::move(fpr)}, {"tpr", std::move(tpr)}};
}

json to_json(const std::vector<TrajectoryEntry>& trajectory) {
  json out = json::array();
  for (const auto& e : trajectory) {
    out.push_back({{"round", e.round}, {"kind", to_string(e.kind)}, {"holdout_auroc", e.auroc}});
  }
  return out;
}

}  // namespace meboost
