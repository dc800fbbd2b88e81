#pragma once

#include <optional>
#include <vector>

#include "onum/onum_dt.hpp"
#include "onum/onum_st.hpp"

namespace onum {

// The known-threshold baselines are the converged branches of the two
// policies, built through the same classes so they share every line of
// select/update code.

/// Multiple-play Thompson sampling serving C/theta_hat_s arms.
inline OnumSt make_mp_ts_known(std::size_t num_arms, double capacity, double theta_hat_s,
                               bool continuous_rewards, PolicySeeds seeds) {
    OnumSt::Options o;
    o.num_arms = num_arms;
    o.capacity = capacity;
    o.continuous_rewards = continuous_rewards;
    return OnumSt::with_known_threshold(o, theta_hat_s, seeds);
}

/// Combinatorial Thompson sampling with a knapsack oracle over known thresholds.
inline OnumDt make_cts_known(std::size_t num_arms, double capacity, std::vector<double> thresholds,
                             bool continuous_rewards, PolicySeeds seeds,
                             std::optional<std::vector<double>> pinned_means = {}) {
    OnumDt::Options o;
    o.num_arms = num_arms;
    o.capacity = capacity;
    o.continuous_rewards = continuous_rewards;
    return OnumDt::with_known_thresholds(o, std::move(thresholds), seeds, std::move(pinned_means));
}

/// Visits the arms in a uniformly random order and gives theta_i to every
/// arm that still fits, which yields a maximal packable subset.
class RandomFeasible final : public Policy {
public:
    RandomFeasible(double capacity, std::vector<double> thresholds, std::uint64_t seed);

    Allocation select() override;
    void update(const RoundFeedback& feedback) override;
    bool converged() const override { return true; }
    std::optional<std::uint64_t> convergence_round() const override { return std::nullopt; }
    std::string_view name() const override { return "random"; }

private:
    double capacity_;
    std::vector<double> thresholds_;
    Rng rng_;
    RoundProtocol protocol_;
};

}  // namespace onum
