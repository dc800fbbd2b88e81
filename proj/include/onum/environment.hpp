#pragma once

#include <cstdint>

#include "onum/domain.hpp"
#include "onum/rng.hpp"

namespace onum {

/// Hidden reward process with censored semi-bandit feedback.
///
/// Every round draws the full reward vector Y_t (one draw per arm, whatever
/// the allocation) so two policies run against the same seed see the same
/// Y_t sequence. Arm i reports Y_{t,i} only when x_i >= theta_i.
///
/// Uniform rewards are drawn on [mu_i - h, mu_i + h] and clamped to [0,1].
class Environment {
public:
    Environment(ProblemInstance instance, std::uint64_t seed);

    /// Throws ContractViolation on a wrong-sized or infeasible allocation.
    RoundFeedback step(const Allocation& x);

    const ProblemInstance& instance() const { return instance_; }
    std::uint64_t rounds_played() const { return round_counter_; }

private:
    double draw(std::size_t arm);

    ProblemInstance instance_;
    Rng rng_;
    std::uint64_t round_counter_ = 0;
};

/// Bernoulli(y) draw; y must lie in [0,1].
int binarize(double y, Rng& rng);

/// sum_i mu_i * 1{x_i >= theta_i}. Throws ContractViolation if x is infeasible.
double mean_reward_of_allocation(const ProblemInstance& instance, const Allocation& x);

}  // namespace onum
