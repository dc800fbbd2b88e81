#include "onum/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace onum {

namespace {

void check_sizes(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
}

double collected_value(std::span<const double> values, std::span<const double> thresholds,
                       const Allocation& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (x.amounts[i] >= thresholds[i]) total += values[i];
    }
    return total;
}

struct Item {
    ArmIndex index;
    double value;
    double weight;
    double ratio;
    int klass;  // items with identical (value, weight) share a class
};

/// Depth-first branch and bound, include-branch first, items visited in
/// decreasing value/weight order.
class KnapsackSearch {
public:
    KnapsackSearch(std::span<const double> values, std::span<const double> weights,
                   double capacity, KnapsackTieBreak tie_break)
        : values_(values),
          weights_(weights),
          limit_(capacity + feasibility_tolerance(capacity)),
          weight_tol_(1e-12 * std::max(1.0, capacity)),
          tie_break_(tie_break),
          in_set_(values.size(), 0),
          best_set_(values.size(), 0) {
        const auto n = values.size();
        items_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ratio;
            if (values[i] <= 0.0) {
                ratio = -std::numeric_limits<double>::infinity();
            } else if (weights[i] == 0.0) {
                ratio = std::numeric_limits<double>::infinity();
            } else {
                ratio = values[i] / weights[i];
            }
            items_.push_back({i, values[i], weights[i], ratio, -1});
        }
        std::stable_sort(items_.begin(), items_.end(),
                         [](const Item& a, const Item& b) { return a.ratio > b.ratio; });
        int next_class = 0;
        for (std::size_t p = 0; p < n; ++p) {
            if (items_[p].klass >= 0) continue;
            items_[p].klass = next_class;
            for (std::size_t q = p + 1; q < n; ++q) {
                if (items_[q].klass < 0 && items_[q].value == items_[p].value &&
                    items_[q].weight == items_[p].weight) {
                    items_[q].klass = next_class;
                }
            }
            ++next_class;
        }
        closed_.assign(static_cast<std::size_t>(next_class), 0);
    }

    std::vector<ArmIndex> run() {
        search(0, 0.0, 0.0, 0);
        std::vector<ArmIndex> out;
        for (std::size_t i = 0; i < best_set_.size(); ++i) {
            if (best_set_[i]) out.push_back(i);
        }
        return out;
    }

private:
    double bound(std::size_t pos, double value, double weight) const {
        double room = limit_ - weight;
        double b = value;
        for (std::size_t p = pos; p < items_.size(); ++p) {
            const Item& it = items_[p];
            if (it.value <= 0.0) break;
            if (closed_[static_cast<std::size_t>(it.klass)]) continue;
            if (it.weight <= room) {
                b += it.value;
                room -= it.weight;
            } else {
                b += it.value * (room / it.weight);
                break;
            }
        }
        return b;
    }

    bool lexicographically_smaller() const {
        auto next = [](const std::vector<char>& s, std::size_t from) {
            while (from < s.size() && !s[from]) ++from;
            return from;
        };
        std::size_t a = next(in_set_, 0);
        std::size_t b = next(best_set_, 0);
        while (a < in_set_.size() && b < best_set_.size()) {
            if (a != b) return a < b;
            a = next(in_set_, a + 1);
            b = next(best_set_, b + 1);
        }
        return a == in_set_.size() && b != best_set_.size();
    }

    bool better_than_best(double value, double weight, std::size_t count) const {
        if (!has_best_) return true;
        if (value > best_value_ + kValueTolerance) return true;
        if (value < best_value_ - kValueTolerance) return false;
        if (tie_break_ == KnapsackTieBreak::MinCount && count != best_count_) {
            return count < best_count_;
        }
        if (weight < best_weight_ - weight_tol_) return true;
        if (weight > best_weight_ + weight_tol_) return false;
        return lexicographically_smaller();
    }

    void search(std::size_t pos, double value, double weight, std::size_t count) {
        if (pos == items_.size()) {
            if (better_than_best(value, weight, count)) {
                has_best_ = true;
                best_value_ = value;
                best_weight_ = weight;
                best_count_ = count;
                best_set_ = in_set_;
            }
            return;
        }
        if (has_best_ && bound(pos, value, weight) < best_value_ - kValueTolerance) return;

        const Item& it = items_[pos];
        auto& closed = closed_[static_cast<std::size_t>(it.klass)];
        if (!closed && weight + it.weight <= limit_) {
            in_set_[it.index] = 1;
            search(pos + 1, value + it.value, weight + it.weight, count + 1);
            in_set_[it.index] = 0;
        }
        // Excluding an item excludes its later identical twins: the lower
        // index is always the preferred representative.
        const char was_closed = closed;
        closed = 1;
        search(pos + 1, value, weight, count);
        closed = was_closed;
    }

    std::span<const double> values_;
    std::span<const double> weights_;
    double limit_;
    double weight_tol_;
    KnapsackTieBreak tie_break_;
    std::vector<Item> items_;
    std::vector<char> closed_;
    std::vector<char> in_set_;
    std::vector<char> best_set_;
    bool has_best_ = false;
    double best_value_ = 0.0;
    double best_weight_ = 0.0;
    std::size_t best_count_ = 0;
};

}  // namespace

Allocation KnapsackSolution::allocation(std::span<const double> weights) const {
    Allocation x = Allocation::zeros(weights.size());
    for (ArmIndex i : selected) x.amounts[i] = weights[i];
    return x;
}

KnapsackSolution solve_knapsack(std::span<const double> values, std::span<const double> weights,
                                double capacity, KnapsackTieBreak tie_break) {
    check_sizes(values, weights, "solve_knapsack");
    if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
        throw std::invalid_argument("solve_knapsack: capacity must be nonnegative");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("solve_knapsack: non-finite value");
        }
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
            throw std::invalid_argument("solve_knapsack: weight " + std::to_string(i) +
                                        " must be nonnegative");
        }
    }

    KnapsackSolution sol;
    sol.selected = KnapsackSearch(values, weights, capacity, tie_break).run();
    for (ArmIndex i : sol.selected) {
        sol.total_value += values[i];
        sol.total_weight += weights[i];
    }
    sol.leftover = std::max(0.0, capacity - sol.total_weight);
    sol.gamma_star = values.empty() ? 0.0 : sol.leftover / static_cast<double>(values.size());
    return sol;
}

std::vector<double> same_threshold_candidates(double capacity, std::size_t num_arms) {
    std::vector<double> set(num_arms);
    for (std::size_t p = 0; p < num_arms; ++p) {
        set[p] = capacity / static_cast<double>(num_arms - p);
    }
    return set;
}

EquivalentSameThreshold allocation_equivalent_same(double theta_s, double capacity,
                                                   std::size_t num_arms) {
    if (num_arms < 1) throw std::invalid_argument("allocation_equivalent_same: K must be >= 1");
    if (!(theta_s > 0.0) || theta_s > capacity) {
        throw std::invalid_argument("allocation_equivalent_same: theta_s must lie in (0, C]");
    }
    const double k = static_cast<double>(num_arms);
    double m = std::floor(capacity / theta_s);
    // floor(C/theta) can be off by one in floating point; settle on the
    // largest M with C/M >= theta_s under the environment's comparison.
    while (m + 1.0 <= k && capacity / (m + 1.0) >= theta_s) m += 1.0;
    while (m > 1.0 && capacity / m < theta_s) m -= 1.0;
    m = std::clamp(m, 1.0, k);

    EquivalentSameThreshold eq;
    eq.m_arms = static_cast<std::size_t>(m);
    eq.theta_set = same_threshold_candidates(capacity, num_arms);
    eq.theta_hat = eq.theta_set[num_arms - eq.m_arms];
    return eq;
}

bool verify_allocation_equivalent(std::span<const double> mean_rewards,
                                  std::span<const double> thresholds_a,
                                  std::span<const double> thresholds_b, double capacity) {
    const double a = solve_knapsack(mean_rewards, thresholds_a, capacity).total_value;
    const double b = solve_knapsack(mean_rewards, thresholds_b, capacity).total_value;
    return std::abs(a - b) <= kValueTolerance;
}

double suboptimality_gap(std::span<const double> mean_rewards, std::span<const double> thresholds,
                         double capacity, const Allocation& x) {
    check_sizes(mean_rewards, thresholds, "suboptimality_gap");
    if (x.size() != mean_rewards.size() || !x.feasible(capacity)) {
        throw std::invalid_argument("suboptimality_gap: allocation is not feasible");
    }
    const double optimum = solve_knapsack(mean_rewards, thresholds, capacity).total_value;
    const double gap = optimum - collected_value(mean_rewards, thresholds, x);
    return gap < 0.0 && gap > -kValueTolerance ? 0.0 : gap;
}

double max_gap(std::span<const double> mean_rewards, std::span<const double> thresholds,
               double capacity) {
    return suboptimality_gap(mean_rewards, thresholds, capacity,
                             Allocation::zeros(mean_rewards.size()));
}

std::size_t max_superarm_size(std::span<const double> thresholds, double capacity) {
    std::vector<double> sorted(thresholds.begin(), thresholds.end());
    std::sort(sorted.begin(), sorted.end());
    const double limit = capacity + feasibility_tolerance(capacity);
    double used = 0.0;
    std::size_t count = 0;
    for (double w : sorted) {
        if (used + w > limit) break;
        used += w;
        ++count;
    }
    return count;
}

std::size_t min_optimal_superarm_size(std::span<const double> mean_rewards,
                                      std::span<const double> thresholds, double capacity) {
    return solve_knapsack(mean_rewards, thresholds, capacity, KnapsackTieBreak::MinCount)
        .selected.size();
}

double kl_bernoulli(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("kl_bernoulli: arguments must lie in [0,1]");
    }
    if (p == q) return 0.0;
    if (q == 0.0 || q == 1.0) {
        throw std::invalid_argument("kl_bernoulli: divergence is infinite for q in {0,1}, p != q");
    }
    double d = 0.0;
    if (p > 0.0) d += p * std::log(p / q);
    if (p < 1.0) d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return d;
}

double lower_bound_constant(std::span<const double> mean_rewards, std::size_t m_arms) {
    const auto k = mean_rewards.size();
    if (m_arms < 1 || m_arms > k) {
        throw std::invalid_argument("lower_bound_constant: M must lie in [1, K]");
    }
    if (m_arms == k) return 0.0;
    std::vector<double> sorted(mean_rewards.begin(), mean_rewards.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double mu_m = sorted[m_arms - 1];
    if (!(mu_m > sorted[m_arms])) {
        throw std::invalid_argument(
            "lower_bound_constant: mu_M == mu_{M+1}, top-M set is not unique");
    }
    if (mu_m == 1.0) return 0.0;  // every d(mu_i, 1) is infinite
    double total = 0.0;
    for (std::size_t i = m_arms; i < k; ++i) {
        total += (mu_m - sorted[i]) / kl_bernoulli(sorted[i], mu_m);
    }
    return total;
}

namespace {

void check_delta_epsilon(double delta, double epsilon) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("W_delta: delta must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("W_delta: epsilon must lie in (0,1)");
    }
}

long round_up(double formula) {
    return std::max(1L, static_cast<long>(std::ceil(formula)));
}

}  // namespace

double w_delta_st_formula(std::size_t num_arms, double delta, double epsilon) {
    if (num_arms < 2) throw std::invalid_argument("W_delta (same threshold): K must be >= 2");
    check_delta_epsilon(delta, epsilon);
    return std::log(std::log2(static_cast<double>(num_arms)) / delta) /
           std::log(1.0 / (1.0 - epsilon));
}

double dt_grid_size(double capacity, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
    return std::ceil(1.0 + capacity / gamma);
}

double w_delta_dt_formula(std::size_t num_arms, double capacity, double gamma, double delta,
                          double epsilon) {
    if (num_arms < 1) throw std::invalid_argument("W_delta (different thresholds): K must be >= 1");
    check_delta_epsilon(delta, epsilon);
    const double levels = std::log2(dt_grid_size(capacity, gamma));
    return std::log(static_cast<double>(num_arms) * levels / delta) /
           std::log(1.0 / (1.0 - epsilon));
}

long w_delta_st(std::size_t num_arms, double delta, double epsilon) {
    return round_up(w_delta_st_formula(num_arms, delta, epsilon));
}

long w_delta_dt(std::size_t num_arms, double capacity, double gamma, double delta,
                double epsilon) {
    return round_up(w_delta_dt_formula(num_arms, capacity, gamma, delta, epsilon));
}

}  // namespace onum
