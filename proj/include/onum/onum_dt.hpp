#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "onum/policy.hpp"

namespace onum {

/// Per-arm binary search on [0, C] down to width gamma.
///
/// theta_high only ever moves to an amount at which a reward was seen, and
/// no reward is possible below the true threshold, so theta_high >= theta_i
/// holds deterministically.
struct DtArmSearchState {
    double theta_hat = 0.0;      // committed estimate (init C)
    double theta_current = 0.0;  // amount allocated this round (init C/K)
    double theta_low = 0.0;
    double theta_high = 0.0;
    bool good = false;           // theta_high - theta_low <= gamma, frozen
    long zero_streak = 0;

    bool operator==(const DtArmSearchState&) const = default;
};

/// Outcome of the packing events for one round.
struct DtEvents {
    bool all_good = false;           // E_theta
    std::vector<double> candidate;   // c_i: midpoint for bad arms, theta_high for good
    std::vector<char> bad_fits;      // B_i (bad arms only)
    std::vector<char> good_fits;     // G_i (good arms only)
};

/// Bad arms are packed first in decreasing sample/candidate ratio (ties by
/// lower index); good arms get what the full bad demand leaves over.
DtEvents dt_compute_events(std::span<const DtArmSearchState> arms, std::span<const double> samples,
                           double capacity);

/// Different-thresholds policy: per-arm threshold search, then
/// combinatorial Thompson sampling through the exact knapsack oracle.
class OnumDt final : public Policy {
public:
    struct Options {
        std::size_t num_arms = 0;
        double capacity = 0.0;
        double delta = 0.1;
        double epsilon = 0.1;
        double gamma = 1e-3;
        bool continuous_rewards = false;
    };

    OnumDt(const Options& options, PolicySeeds seeds);

    /// Every arm already good with the given estimates (the combinatorial
    /// Thompson sampling baseline). `pinned_means`, when set, replaces the
    /// posterior samples, which turns the policy into the clairvoyant oracle.
    static OnumDt with_known_thresholds(const Options& options, std::vector<double> thresholds,
                                        PolicySeeds seeds,
                                        std::optional<std::vector<double>> pinned_means = {});

    Allocation select() override;
    void update(const RoundFeedback& feedback) override;
    bool converged() const override { return all_good_; }
    std::optional<std::uint64_t> convergence_round() const override { return convergence_round_; }
    std::string_view name() const override { return known_ ? "cts-known" : "onum-dt"; }

    std::vector<double> theta_hat() const;
    const std::vector<DtArmSearchState>& arms() const { return arms_; }
    const ThompsonSampler& sampler() const { return sampler_; }
    long w_delta() const { return w_delta_; }

private:
    OnumDt(const Options& options, PolicySeeds seeds, bool known);

    Options options_;
    bool known_;
    long w_delta_ = 0;
    std::vector<DtArmSearchState> arms_;
    ThompsonSampler sampler_;
    RewardBinarizer binarizer_;
    RoundProtocol protocol_;
    bool all_good_ = false;
    std::vector<char> served_;  // good arms given their estimate in the last select()
    std::optional<std::uint64_t> convergence_round_;
};

}  // namespace onum
