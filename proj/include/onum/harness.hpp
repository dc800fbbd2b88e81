#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onum/domain.hpp"
#include "onum/policy.hpp"

namespace onum {

/// Per-round hook for tests and diagnostics. Runs after the policy update.
struct RoundContext {
    std::uint64_t round;
    const ProblemInstance& instance;
    const Policy& policy;
    const Allocation& allocation;
    const RoundFeedback& feedback;
    double cumulative_regret;
};
using RoundObserver = std::function<void(const RoundContext&)>;

/// Builds the configured policy for one repeat. The policy gets K, C and
/// its parameters; the known-threshold baselines also get their thresholds.
std::unique_ptr<Policy> make_policy(const ExperimentConfig& config, std::uint64_t repeat_index);

/// Runs T rounds. Each round's allocation is checked for feasibility and
/// its pseudo-regret (optimum - sum of mu over served arms) accumulated.
/// Contract violations are rethrown with the round number attached.
RegretTrace run_single(const ExperimentConfig& config, std::uint64_t repeat_index,
                       const RoundObserver& observer = {});

struct AggregateTrace {
    std::vector<double> mean_regret;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::uint64_t n_repeats = 0;
    std::vector<std::optional<std::uint64_t>> convergence_rounds;

    std::size_t rounds() const { return mean_regret.size(); }
};

/// Mean and 95% band mean +/- q * sd / sqrt(n), q = 1.96 for n >= 30 and
/// the Student-t quantile below that. A single trace gives a zero-width band.
AggregateTrace aggregate(std::span<const RegretTrace> traces);

/// Runs all repeats (in parallel when threads != 1; 0 = hardware
/// concurrency) and aggregates in repeat order.
AggregateTrace run_experiment(const ExperimentConfig& config, unsigned threads = 0);

/// The three evaluation instances with their reported parameters.
ExperimentConfig builtin_instance(int id);

struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of cumulative regret against ln t over t >= burn_in * T.
/// Throws std::invalid_argument for T < 100 or a constant window.
LogFit fit_log_growth(std::span<const double> cumulative, double burn_in_fraction);

// CSV: header `round,mean_regret,ci_low,ci_high`, one row per round.
void write_trace_csv(std::ostream& out, const AggregateTrace& trace);
/// Parses the CSV schema back; throws ConfigError naming the bad column or line.
AggregateTrace read_trace_csv(std::istream& in);

/// Warnings about configurations that run but void some guarantee.
std::vector<std::string> config_warnings(const ExperimentConfig& config);

/// Sidecar JSON holding the config echo and a run summary.
void write_metadata(std::ostream& out, const ExperimentConfig& config, const AggregateTrace& trace);

/// Build identifier baked in at configure time ("unknown" outside git).
std::string build_commit();

}  // namespace onum
