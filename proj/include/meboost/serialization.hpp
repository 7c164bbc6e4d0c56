#pragma once

#include "json.hpp"

#include "meboost/baselines.hpp"
#include "meboost/boost_core.hpp"
#include "meboost/meboost.hpp"
#include "meboost/metrics.hpp"
#include "meboost/tree.hpp"

namespace meboost {

nlohmann::json tree_to_json(const TreeModel& tree);
TreeModel tree_from_json(const nlohmann::json& j);

/// {"n_rounds": n, "learners": [{"kind", "alpha", "weighted_error", "tree"}, ...]}
nlohmann::json ensemble_to_json(const EnsembleModel& e);
EnsembleModel ensemble_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainConfig& cfg);
nlohmann::json to_json(const MEBoostConfig& cfg);
nlohmann::json to_json(const SamplerConfig& cfg);
nlohmann::json to_json(const RocCurve& curve);
nlohmann::json to_json(const std::vector<TrajectoryEntry>& trajectory);

}  // namespace meboost
