#include "onum/config_io.hpp"

#include <fstream>
#include <set>

namespace onum {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

json reward_to_json(const RewardModel& reward) {
    if (reward.kind == RewardKind::Bernoulli) return {{"kind", "bernoulli"}};
    return {{"kind", "uniform"}, {"halfwidth", reward.halfwidth}};
}

RewardModel reward_from_json(const json& j) {
    if (j.is_string()) {
        const auto kind = j.get<std::string>();
        if (kind == "bernoulli") return RewardModel::bernoulli();
        if (kind == "uniform") return RewardModel::uniform();
        throw ConfigError("unknown reward kind '" + kind + "'");
    }
    reject_unknown_keys(j, {"kind", "halfwidth"}, "reward");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "bernoulli") return RewardModel::bernoulli();
    if (kind == "uniform") return RewardModel::uniform(get_or(j, "halfwidth", 0.1));
    throw ConfigError("unknown reward kind '" + kind + "'");
}

template <typename F>
auto translate_errors(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

}  // namespace

json to_json(const ProblemInstance& instance) {
    return {{"capacity", instance.capacity},
            {"mean_rewards", instance.mean_rewards},
            {"thresholds", instance.thresholds},
            {"reward", reward_to_json(instance.reward)}};
}

json to_json(const ExperimentConfig& config) {
    json j = {{"label", config.label},
              {"instance", to_json(config.instance)},
              {"algorithm", to_string(config.algorithm)},
              {"horizon", config.horizon},
              {"repeats", config.repeats},
              {"seed", config.base_seed},
              {"delta", config.delta},
              {"epsilon", config.epsilon},
              {"gamma", config.gamma},
              {"delta_alpha", nullptr},
              {"known_thresholds", nullptr}};
    if (config.delta_alpha) j["delta_alpha"] = *config.delta_alpha;
    if (config.known_thresholds) j["known_thresholds"] = *config.known_thresholds;
    return j;
}

ProblemInstance instance_from_json(const json& j) {
    return translate_errors([&] {
        reject_unknown_keys(j, {"capacity", "mean_rewards", "thresholds", "reward"}, "instance");
        ProblemInstance p;
        p.capacity = j.at("capacity").get<double>();
        p.mean_rewards = j.at("mean_rewards").get<std::vector<double>>();
        p.thresholds = j.at("thresholds").get<std::vector<double>>();
        p.reward = j.contains("reward") ? reward_from_json(j.at("reward")) : RewardModel::bernoulli();
        validate_instance(p);
        return p;
    });
}

ExperimentConfig config_from_json(const json& j) {
    return translate_errors([&] {
        reject_unknown_keys(j,
                            {"label", "instance", "algorithm", "horizon", "repeats", "seed",
                             "delta", "epsilon", "gamma", "delta_alpha", "known_thresholds"},
                            "experiment config");
        ExperimentConfig c;
        c.instance = instance_from_json(j.at("instance"));
        c.label = get_or<std::string>(j, "label", "");
        if (j.contains("algorithm")) c.algorithm = algorithm_from_string(j.at("algorithm"));
        c.horizon = get_or<std::uint64_t>(j, "horizon", c.horizon);
        c.repeats = get_or<std::uint64_t>(j, "repeats", c.repeats);
        c.base_seed = get_or<std::uint64_t>(j, "seed", c.base_seed);
        c.delta = get_or(j, "delta", c.delta);
        c.epsilon = get_or(j, "epsilon", c.epsilon);
        c.gamma = get_or(j, "gamma", c.gamma);
        if (j.contains("delta_alpha") && !j.at("delta_alpha").is_null()) {
            c.delta_alpha = j.at("delta_alpha").get<double>();
        }
        if (j.contains("known_thresholds") && !j.at("known_thresholds").is_null()) {
            c.known_thresholds = j.at("known_thresholds").get<std::vector<double>>();
        }
        validate_config(c);
        return c;
    });
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json(config).dump(2) << '\n';
}

}  // namespace onum
