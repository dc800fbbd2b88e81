#include "onum/environment.hpp"

#include <algorithm>
#include <utility>

namespace onum {

namespace {

void check_feasible(const ProblemInstance& instance, const Allocation& x) {
    if (x.size() != instance.num_arms()) {
        throw ContractViolation("allocation has " + std::to_string(x.size()) +
                                " entries for " + std::to_string(instance.num_arms()) + " arms");
    }
    if (!x.feasible(instance.capacity)) {
        throw ContractViolation("infeasible allocation: total " + std::to_string(x.total()) +
                                " exceeds capacity " + std::to_string(instance.capacity));
    }
}

}  // namespace

Environment::Environment(ProblemInstance instance, std::uint64_t seed)
    : instance_(std::move(instance)), rng_(seed) {
    validate_instance(instance_);
}

double Environment::draw(std::size_t arm) {
    const double mu = instance_.mean_rewards[arm];
    if (instance_.reward.kind == RewardKind::Bernoulli) {
        return rng_.bernoulli(mu) ? 1.0 : 0.0;
    }
    const double h = instance_.reward.halfwidth;
    return std::clamp(rng_.uniform(mu - h, mu + h), 0.0, 1.0);
}

RoundFeedback Environment::step(const Allocation& x) {
    check_feasible(instance_, x);
    RoundFeedback feedback;
    feedback.round = ++round_counter_;
    feedback.observed.resize(instance_.num_arms());
    for (std::size_t i = 0; i < instance_.num_arms(); ++i) {
        const double y = draw(i);
        feedback.observed[i] = x.amounts[i] >= instance_.thresholds[i] ? y : 0.0;
        feedback.collected_reward += feedback.observed[i];
    }
    return feedback;
}

int binarize(double y, Rng& rng) {
    if (!(y >= 0.0 && y <= 1.0)) {
        throw std::invalid_argument("binarize: reward " + std::to_string(y) + " outside [0,1]");
    }
    return rng.bernoulli(y) ? 1 : 0;
}

double mean_reward_of_allocation(const ProblemInstance& instance, const Allocation& x) {
    check_feasible(instance, x);
    double total = 0.0;
    for (std::size_t i = 0; i < instance.num_arms(); ++i) {
        if (x.amounts[i] >= instance.thresholds[i]) total += instance.mean_rewards[i];
    }
    return total;
}

}  // namespace onum
