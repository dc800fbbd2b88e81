#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "onum/domain.hpp"

namespace onum {

// JSON schema of an experiment file (all keys but "instance" optional):
//
// {
//   "label": "instance1",
//   "instance": {
//     "capacity": 20,
//     "mean_rewards": [0.25, ...],
//     "thresholds": [0.7, ...],
//     "reward": {"kind": "bernoulli"}            // or {"kind": "uniform", "halfwidth": 0.1}
//   },
//   "algorithm": "onum-st",                       // onum-dt, mp-ts-known, cts-known, random
//   "horizon": 10000, "repeats": 50, "seed": 1,
//   "delta": 0.1, "epsilon": 0.1, "gamma": 0.001,
//   "delta_alpha": null,                          // anytime delta preset
//   "known_thresholds": null                      // baselines only
// }

nlohmann::json to_json(const ProblemInstance& instance);
nlohmann::json to_json(const ExperimentConfig& config);

/// Throw ConfigError on missing/mistyped/unknown keys or failed validation.
ProblemInstance instance_from_json(const nlohmann::json& j);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

}  // namespace onum
