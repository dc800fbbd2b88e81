#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace onum {

using ArmIndex = std::size_t;

/// Raised for malformed instances, configs and out-of-domain arguments.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a policy or the environment breaks the round protocol
/// (infeasible allocation, feedback for the wrong round, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class RewardKind { Bernoulli, Uniform };

struct RewardModel {
    RewardKind kind = RewardKind::Bernoulli;
    double halfwidth = 0.0;  // Uniform only

    static RewardModel bernoulli() { return {RewardKind::Bernoulli, 0.0}; }
    static RewardModel uniform(double h = 0.1) { return {RewardKind::Uniform, h}; }

    bool continuous() const { return kind == RewardKind::Uniform; }
    bool operator==(const RewardModel&) const = default;
};

/// Ground truth of an instance. Only the environment and the harness read it.
struct ProblemInstance {
    double capacity = 0.0;
    std::vector<double> mean_rewards;
    std::vector<double> thresholds;
    RewardModel reward;

    std::size_t num_arms() const { return mean_rewards.size(); }
    bool operator==(const ProblemInstance&) const = default;
};

/// Throws ConfigError unless K >= 1, |mu| == |theta|, mu_i in [0,1],
/// theta_i in [0,C], C >= 0 and a nonnegative uniform halfwidth.
const ProblemInstance& validate_instance(const ProblemInstance& instance);

/// Slack allowed on sum(x) <= C.
inline double feasibility_tolerance(double capacity) {
    return 1e-9 * (capacity > 1.0 ? capacity : 1.0);
}

struct Allocation {
    std::vector<double> amounts;

    std::size_t size() const { return amounts.size(); }
    double total() const;
    bool feasible(double capacity) const;

    static Allocation zeros(std::size_t num_arms) { return {std::vector<double>(num_arms, 0.0)}; }
};

struct RoundFeedback {
    std::uint64_t round = 0;           // 1-based
    std::vector<double> observed;      // censored rewards Y'
    double collected_reward = 0.0;     // sum of observed
};

/// Beta(S_i, F_i) counts, starting at Beta(1,1).
struct BetaPosterior {
    std::vector<double> successes;
    std::vector<double> failures;

    explicit BetaPosterior(std::size_t num_arms = 0)
        : successes(num_arms, 1.0), failures(num_arms, 1.0) {}

    std::size_t size() const { return successes.size(); }
    bool operator==(const BetaPosterior&) const = default;
};

enum class Algorithm { OnumSt, OnumDt, MpTsKnown, CtsKnown, RandomBaseline };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct ExperimentConfig {
    ProblemInstance instance;
    Algorithm algorithm = Algorithm::OnumSt;
    std::uint64_t horizon = 10000;
    std::uint64_t repeats = 50;
    std::uint64_t base_seed = 1;
    double delta = 0.1;
    double epsilon = 0.1;
    double gamma = 1e-3;
    // Anytime preset delta = T^{-(log T)^{-alpha}}; overrides `delta` when set.
    std::optional<double> delta_alpha;
    // Thresholds handed to the known-threshold baselines. Defaults: the
    // same-threshold equivalent for MpTsKnown, the true vector for CtsKnown.
    std::optional<std::vector<double>> known_thresholds;
    std::string label;

    /// delta actually used by the policies.
    double effective_delta() const;
    bool operator==(const ExperimentConfig&) const = default;
};

const ExperimentConfig& validate_config(const ExperimentConfig& config);

struct RegretTrace {
    std::vector<double> cumulative;
    std::optional<std::uint64_t> convergence_round;
};

}  // namespace onum
