#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "onum/policy.hpp"

namespace onum {

/// Binary search over the candidate set for the same-threshold policy.
///
/// Positions are 1-based, matching l = 0, u = K, j = ceil(u/2) at start:
/// candidate(j) = theta_set[j-1] = C / (K - j + 1), so position j serves
/// exactly K - j + 1 arms. Invariant: 0 <= lower <= current <= upper <= K.
struct StSearchState {
    std::vector<double> theta_set;  // ascending: C/K, ..., C
    std::size_t lower = 0;
    std::size_t upper = 0;
    std::size_t current = 0;
    long consecutive_zero_rounds = 0;  // W_c
    std::vector<long> zero_streak;     // Z_i
    long w_delta = 0;

    bool converged() const { return current == upper; }
    double theta_hat() const { return theta_set[current - 1]; }
    std::size_t served_arms() const { return theta_set.size() - current + 1; }

    bool operator==(const StSearchState&) const = default;
};

/// Same-threshold policy: binary search for the allocation-equivalent
/// threshold interleaved with multiple-play Thompson sampling; pure MP-TS
/// once the search has converged.
class OnumSt final : public Policy {
public:
    struct Options {
        std::size_t num_arms = 0;
        double capacity = 0.0;
        double delta = 0.1;
        double epsilon = 0.1;
        bool continuous_rewards = false;  // W_delta = 1 and binarized updates
    };

    /// Fresh search. Requires K >= 2; throws std::invalid_argument otherwise.
    OnumSt(const Options& options, PolicySeeds seeds);

    /// Search already finished at the candidate equivalent to `theta_hat_s`
    /// (the multiple-play Thompson sampling baseline).
    static OnumSt with_known_threshold(const Options& options, double theta_hat_s,
                                       PolicySeeds seeds);

    Allocation select() override;
    void update(const RoundFeedback& feedback) override;
    bool converged() const override { return search_.converged(); }
    std::optional<std::uint64_t> convergence_round() const override { return convergence_round_; }
    std::string_view name() const override { return known_ ? "mp-ts-known" : "onum-st"; }

    double theta_hat() const { return search_.theta_hat(); }
    const StSearchState& search() const { return search_; }
    const ThompsonSampler& sampler() const { return sampler_; }
    const std::vector<ArmIndex>& last_selected() const { return selected_; }

    /// Continue as a policy with the given posterior and sampling stream,
    /// keeping the search state (used to compare against the baseline).
    void reset_sampling(ThompsonSampler sampler, RewardBinarizer binarizer) {
        sampler_ = std::move(sampler);
        binarizer_ = std::move(binarizer);
    }
    const RewardBinarizer& binarizer() const { return binarizer_; }

private:
    OnumSt(const Options& options, PolicySeeds seeds, bool known);

    void update_searching(const RoundFeedback& feedback);
    void update_converged(const RoundFeedback& feedback);

    Options options_;
    bool known_;
    StSearchState search_;
    ThompsonSampler sampler_;
    RewardBinarizer binarizer_;
    RoundProtocol protocol_;
    std::vector<ArmIndex> selected_;
    std::vector<char> in_selected_;
    std::optional<std::uint64_t> convergence_round_;
};

}  // namespace onum
