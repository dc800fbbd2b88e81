#include "onum/domain.hpp"

#include <cmath>
#include <numeric>

namespace onum {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw ConfigError(message);
}

}  // namespace

const ProblemInstance& validate_instance(const ProblemInstance& instance) {
    const auto k = instance.mean_rewards.size();
    require(k >= 1, "instance must have at least one arm");
    require(instance.thresholds.size() == k,
            "mean_rewards has " + std::to_string(k) + " entries but thresholds has " +
                std::to_string(instance.thresholds.size()));
    require(std::isfinite(instance.capacity) && instance.capacity >= 0.0,
            "capacity must be a nonnegative finite number");
    for (std::size_t i = 0; i < k; ++i) {
        const double mu = instance.mean_rewards[i];
        require(std::isfinite(mu) && mu >= 0.0 && mu <= 1.0,
                "mean reward of arm " + std::to_string(i) + " out of [0,1]");
        const double theta = instance.thresholds[i];
        require(std::isfinite(theta) && theta >= 0.0 && theta <= instance.capacity,
                "threshold of arm " + std::to_string(i) + " out of [0,C]");
    }
    if (instance.reward.kind == RewardKind::Uniform) {
        require(std::isfinite(instance.reward.halfwidth) && instance.reward.halfwidth >= 0.0,
                "uniform halfwidth must be nonnegative");
    }
    return instance;
}

double Allocation::total() const {
    return std::accumulate(amounts.begin(), amounts.end(), 0.0);
}

bool Allocation::feasible(double capacity) const {
    for (double x : amounts) {
        if (!(x >= 0.0)) return false;
    }
    return total() <= capacity + feasibility_tolerance(capacity);
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::OnumSt: return "onum-st";
        case Algorithm::OnumDt: return "onum-dt";
        case Algorithm::MpTsKnown: return "mp-ts-known";
        case Algorithm::CtsKnown: return "cts-known";
        case Algorithm::RandomBaseline: return "random";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
    for (auto a : {Algorithm::OnumSt, Algorithm::OnumDt, Algorithm::MpTsKnown,
                   Algorithm::CtsKnown, Algorithm::RandomBaseline}) {
        if (to_string(a) == name) return a;
    }
    throw ConfigError("unknown algorithm '" + name +
                      "' (expected onum-st, onum-dt, mp-ts-known, cts-known or random)");
}

double ExperimentConfig::effective_delta() const {
    if (!delta_alpha) return delta;
    const double log_t = std::log(static_cast<double>(horizon));
    // delta = T^{-(log T)^{-alpha}} = exp(-(log T)^{1 - alpha})
    return std::exp(-std::pow(log_t, 1.0 - *delta_alpha));
}

const ExperimentConfig& validate_config(const ExperimentConfig& config) {
    validate_instance(config.instance);
    require(config.horizon >= 1, "horizon must be at least 1");
    require(config.repeats >= 1, "repeats must be at least 1");
    require(config.delta > 0.0 && config.delta < 1.0, "delta must lie in (0,1)");
    require(config.epsilon > 0.0 && config.epsilon < 1.0, "epsilon must lie in (0,1)");
    if (config.algorithm == Algorithm::OnumDt) {
        require(config.gamma > 0.0 && std::isfinite(config.gamma), "gamma must be positive");
    }
    if (config.delta_alpha) {
        require(*config.delta_alpha > 0.0, "delta_alpha must be positive");
        require(config.horizon >= 3, "anytime delta preset needs horizon >= 3");
        const double d = config.effective_delta();
        require(d > 0.0 && d < 1.0, "anytime delta preset yields delta outside (0,1)");
    }
    if (config.known_thresholds) {
        const auto& known = *config.known_thresholds;
        require(!known.empty(), "known_thresholds must not be empty");
        for (double v : known) {
            require(v >= 0.0 && v <= config.instance.capacity,
                    "known_thresholds entries must lie in [0,C]");
        }
        if (config.algorithm == Algorithm::CtsKnown) {
            require(known.size() == config.instance.num_arms(),
                    "known_thresholds for cts-known must have one entry per arm");
        }
        if (config.algorithm == Algorithm::MpTsKnown) {
            require(known.size() == 1 && known[0] > 0.0,
                    "known_thresholds for mp-ts-known must be a single positive value");
        }
    }
    return config;
}

}  // namespace onum
