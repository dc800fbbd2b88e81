#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "onum/domain.hpp"
#include "onum/rng.hpp"

namespace onum {

/// A policy sees only its construction arguments and the censored feedback.
/// The ground-truth instance stays on the harness side.
///
/// Rounds follow select() -> Environment::step() -> update(feedback).
class Policy {
public:
    virtual ~Policy() = default;

    virtual Allocation select() = 0;
    virtual void update(const RoundFeedback& feedback) = 0;

    /// True once the threshold search has finished (always true for
    /// policies that start with known thresholds).
    virtual bool converged() const = 0;
    /// Round in which the search finished; 0 when known from the start,
    /// nullopt while searching or for policies without a search.
    virtual std::optional<std::uint64_t> convergence_round() const = 0;

    virtual std::string_view name() const = 0;
};

struct PolicySeeds {
    std::uint64_t sampling = 0;
    std::uint64_t binarization = 0;

    static PolicySeeds for_repeat(std::uint64_t base_seed, std::uint64_t repeat) {
        return {stream_seed(base_seed, repeat, StreamRole::PosteriorSampling),
                stream_seed(base_seed, repeat, StreamRole::Binarization)};
    }
};

/// Beta posteriors plus the stream used to sample them.
class ThompsonSampler {
public:
    ThompsonSampler(std::size_t num_arms, std::uint64_t seed) : posterior_(num_arms), rng_(seed) {}

    /// One independent Beta(S_i, F_i) draw per arm, or the pinned means.
    std::vector<double> sample();

    void add(ArmIndex arm, double successes, double failures) {
        posterior_.successes[arm] += successes;
        posterior_.failures[arm] += failures;
    }

    /// Replace sampling by fixed values (oracle-style baseline).
    void pin(std::vector<double> means) { pinned_ = std::move(means); }

    const BetaPosterior& posterior() const { return posterior_; }
    std::size_t size() const { return posterior_.size(); }

    bool operator==(const ThompsonSampler&) const = default;

private:
    BetaPosterior posterior_;
    Rng rng_;
    std::optional<std::vector<double>> pinned_;
};

/// Maps an observed reward to the binary value fed to the posterior.
/// Bernoulli rewards pass through; continuous rewards are binarized.
class RewardBinarizer {
public:
    RewardBinarizer(bool continuous, std::uint64_t seed) : continuous_(continuous), rng_(seed) {}

    int operator()(double observed);
    bool continuous() const { return continuous_; }

    bool operator==(const RewardBinarizer&) const = default;

private:
    bool continuous_;
    Rng rng_;
};

/// Enforces one update per select, in round order.
class RoundProtocol {
public:
    void on_select();
    void on_update(const RoundFeedback& feedback, std::size_t num_arms);
    std::uint64_t completed_rounds() const { return completed_; }

    bool operator==(const RoundProtocol&) const = default;

private:
    std::uint64_t completed_ = 0;
    bool pending_ = false;
};

/// Indices of the `count` largest scores, ties by lower index.
std::vector<ArmIndex> top_arms(std::span<const double> scores, std::size_t count);

}  // namespace onum
