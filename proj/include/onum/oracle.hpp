#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "onum/domain.hpp"

namespace onum {

// ---------------------------------------------------------------------------
// 0-1 knapsack: items are arms, value mu_i, weight theta_i, capacity C.
// ---------------------------------------------------------------------------

/// How equal-value optima are ordered. Both fall back to the
/// lexicographically smallest index set.
enum class KnapsackTieBreak {
    MinWeight,  // default: smallest total weight first
    MinCount,   // smallest number of items first (used for k*)
};

struct KnapsackSolution {
    std::vector<ArmIndex> selected;  // ascending
    double total_value = 0.0;        // sum of values over `selected`, in index order
    double total_weight = 0.0;
    double leftover = 0.0;           // C - total_weight, floored at 0
    double gamma_star = 0.0;         // leftover / K

    /// Allocation giving weight_i to each selected arm, 0 elsewhere.
    Allocation allocation(std::span<const double> weights) const;
};

/// Exact branch-and-bound over real weights with a fractional-relaxation
/// bound. A subset is feasible when its weight is within
/// feasibility_tolerance(C) of C. Value ties are resolved within 1e-12.
///
/// Throws std::invalid_argument on malformed input.
KnapsackSolution solve_knapsack(std::span<const double> values, std::span<const double> weights,
                                double capacity,
                                KnapsackTieBreak tie_break = KnapsackTieBreak::MinWeight);

/// Tolerance used when comparing optimal knapsack values.
inline constexpr double kValueTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Allocation equivalence
// ---------------------------------------------------------------------------

struct EquivalentSameThreshold {
    std::size_t m_arms = 0;           // M = min(floor(C/theta_s), K)
    double theta_hat = 0.0;           // C / M
    std::vector<double> theta_set;    // ascending: C/K, C/(K-1), ..., C
};

/// Candidate set for the same-threshold search: theta_set[p] = C / (K - p).
std::vector<double> same_threshold_candidates(double capacity, std::size_t num_arms);

/// M is the largest arm count with C/M >= theta_s (evaluated in floating
/// point, the same comparison the environment applies), capped at K.
EquivalentSameThreshold allocation_equivalent_same(double theta_s, double capacity,
                                                   std::size_t num_arms);

bool verify_allocation_equivalent(std::span<const double> mean_rewards,
                                  std::span<const double> thresholds_a,
                                  std::span<const double> thresholds_b, double capacity);

// ---------------------------------------------------------------------------
// Gaps and diagnostics
// ---------------------------------------------------------------------------

/// Delta_x = optimal value - sum_i mu_i 1{x_i >= theta_i}.
double suboptimality_gap(std::span<const double> mean_rewards, std::span<const double> thresholds,
                         double capacity, const Allocation& x);

/// Delta_m: the gap of the all-zero allocation, which only collects arms
/// with theta_i = 0.
double max_gap(std::span<const double> mean_rewards, std::span<const double> thresholds,
               double capacity);

/// Largest number of arms any feasible allocation can serve.
std::size_t max_superarm_size(std::span<const double> thresholds, double capacity);

/// Smallest number of served arms among optimal allocations.
std::size_t min_optimal_superarm_size(std::span<const double> mean_rewards,
                                      std::span<const double> thresholds, double capacity);

/// KL divergence between Bernoulli(p) and Bernoulli(q), 0 ln 0 = 0.
double kl_bernoulli(double p, double q);

/// Asymptotic regret constant sum_{i outside top-M} (mu_M - mu_i) / d(mu_i, mu_M).
/// Sorts a copy of mu. Throws std::invalid_argument when mu_M == mu_{M+1}.
double lower_bound_constant(std::span<const double> mean_rewards, std::size_t m_arms);

// ---------------------------------------------------------------------------
// Zero-streak lengths W_delta (rounded up, never below 1)
// ---------------------------------------------------------------------------

/// ceil(log(log2(K)/delta) / log(1/(1-eps))), K >= 2.
long w_delta_st(std::size_t num_arms, double delta, double epsilon);

/// ceil(log(K log2(ceil(1 + C/gamma)) / delta) / log(1/(1-eps))).
long w_delta_dt(std::size_t num_arms, double capacity, double gamma, double delta,
                double epsilon);

/// Unrounded formulas, for reporting.
double w_delta_st_formula(std::size_t num_arms, double delta, double epsilon);
double w_delta_dt_formula(std::size_t num_arms, double capacity, double gamma, double delta,
                          double epsilon);

/// ceil(1 + C/gamma): size of the gamma-grid on [0, C].
double dt_grid_size(double capacity, double gamma);

}  // namespace onum
