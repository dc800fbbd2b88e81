#include "onum/onum_dt.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

#include "onum/oracle.hpp"

namespace onum {

namespace {

/// Arms of one class in packing order: higher ratio first, then lower index.
std::vector<ArmIndex> packing_order(std::span<const ArmIndex> arms, std::span<const double> ratio) {
    std::vector<ArmIndex> order(arms.begin(), arms.end());
    std::sort(order.begin(), order.end(), [&](ArmIndex a, ArmIndex b) {
        if (ratio[a] != ratio[b]) return ratio[a] > ratio[b];
        return a < b;
    });
    return order;
}

}  // namespace

DtEvents dt_compute_events(std::span<const DtArmSearchState> arms, std::span<const double> samples,
                           double capacity) {
    const auto k = arms.size();
    if (samples.size() != k) throw std::invalid_argument("dt_compute_events: sample size mismatch");

    DtEvents ev;
    ev.candidate.resize(k);
    ev.bad_fits.assign(k, 0);
    ev.good_fits.assign(k, 0);
    ev.all_good = std::all_of(arms.begin(), arms.end(), [](const auto& a) { return a.good; });

    std::vector<double> ratio(k);
    std::vector<ArmIndex> bad, good;
    for (ArmIndex i = 0; i < k; ++i) {
        const auto& a = arms[i];
        ev.candidate[i] = a.good ? a.theta_high : 0.5 * (a.theta_low + a.theta_high);
        assert(a.good || ev.candidate[i] > 0.0);
        ratio[i] = samples[i] / ev.candidate[i];
        (a.good ? good : bad).push_back(i);
    }
    if (ev.all_good) return ev;

    // B_i: c_i <= C - sum of higher-priority bad candidates.
    double used = 0.0;
    for (ArmIndex i : packing_order(bad, ratio)) {
        ev.bad_fits[i] = ev.candidate[i] <= capacity - used;
        used += ev.candidate[i];
    }
    // G_i: c_i <= C - (all bad candidates) - higher-priority good candidates.
    for (ArmIndex i : packing_order(good, ratio)) {
        ev.good_fits[i] = ev.candidate[i] <= capacity - used;
        used += ev.candidate[i];
    }
    return ev;
}

OnumDt::OnumDt(const Options& options, PolicySeeds seeds) : OnumDt(options, seeds, false) {}

OnumDt::OnumDt(const Options& options, PolicySeeds seeds, bool known)
    : options_(options),
      known_(known),
      sampler_(options.num_arms, seeds.sampling),
      binarizer_(options.continuous_rewards, seeds.binarization),
      served_(options.num_arms, 0) {
    const auto k = options.num_arms;
    if (k < 1) throw std::invalid_argument("onum-dt: need at least one arm");
    if (!(options.capacity > 0.0)) throw std::invalid_argument("onum-dt: capacity must be positive");
    DtArmSearchState init;
    init.theta_hat = options.capacity;
    init.theta_current = options.capacity / static_cast<double>(k);
    init.theta_low = 0.0;
    init.theta_high = options.capacity;
    arms_.assign(k, init);
    if (known) return;

    if (!(options.gamma > 0.0)) throw std::invalid_argument("onum-dt: gamma must be positive");
    w_delta_ = options.continuous_rewards
                   ? 1
                   : w_delta_dt(k, options.capacity, options.gamma, options.delta, options.epsilon);
}

OnumDt OnumDt::with_known_thresholds(const Options& options, std::vector<double> thresholds,
                                     PolicySeeds seeds,
                                     std::optional<std::vector<double>> pinned_means) {
    if (thresholds.size() != options.num_arms) {
        throw std::invalid_argument("cts-known: one threshold per arm required");
    }
    OnumDt policy(options, seeds, true);
    for (ArmIndex i = 0; i < options.num_arms; ++i) {
        auto& a = policy.arms_[i];
        a.theta_low = a.theta_high = a.theta_hat = thresholds[i];
        a.good = true;
    }
    if (pinned_means) {
        if (pinned_means->size() != options.num_arms) {
            throw std::invalid_argument("cts-known: one pinned mean per arm required");
        }
        policy.sampler_.pin(std::move(*pinned_means));
    }
    policy.all_good_ = true;
    policy.convergence_round_ = 0;
    return policy;
}

std::vector<double> OnumDt::theta_hat() const {
    std::vector<double> out(arms_.size());
    std::transform(arms_.begin(), arms_.end(), out.begin(),
                   [](const auto& a) { return a.theta_hat; });
    return out;
}

Allocation OnumDt::select() {
    protocol_.on_select();
    const auto samples = sampler_.sample();
    Allocation x = Allocation::zeros(options_.num_arms);

    std::fill(served_.begin(), served_.end(), 0);
    if (!all_good_) {
        const auto ev = dt_compute_events(arms_, samples, options_.capacity);
        for (ArmIndex i = 0; i < arms_.size(); ++i) {
            auto& a = arms_[i];
            if (a.good) {
                served_[i] = ev.good_fits[i];
                a.theta_current = ev.good_fits[i] ? a.theta_high : 0.0;
            } else {
                a.theta_current = ev.bad_fits[i] ? ev.candidate[i] : 0.0;
            }
            x.amounts[i] = a.theta_current;
        }
        return x;
    }

    const auto estimates = theta_hat();
    const auto sol = solve_knapsack(samples, estimates, options_.capacity);
    for (auto& a : arms_) a.theta_current = 0.0;
    for (ArmIndex i : sol.selected) {
        arms_[i].theta_current = arms_[i].theta_hat;
        served_[i] = 1;
        x.amounts[i] = arms_[i].theta_hat;
    }
    return x;
}

void OnumDt::update(const RoundFeedback& feedback) {
    protocol_.on_update(feedback, options_.num_arms);

    for (ArmIndex i = 0; i < arms_.size(); ++i) {
        auto& a = arms_[i];
        const double observed = feedback.observed[i];
        if (!a.good) {
            if (!(a.theta_current > 0.0)) continue;  // not probed this round
            if (observed > 0.0) {
                a.theta_high = a.theta_current;
                const int y = binarizer_(observed);
                sampler_.add(i, y, 1 - y + a.zero_streak);
                a.zero_streak = 0;
            } else {
                ++a.zero_streak;
                if (a.zero_streak == w_delta_) {
                    a.theta_low = a.theta_current;
                    a.zero_streak = 0;
                }
            }
            if (a.theta_high - a.theta_low <= options_.gamma) {
                a.good = true;
                a.theta_hat = a.theta_high;
            }
        } else if (served_[i]) {
            // Served at its committed estimate, via G_i or the oracle.
            const int y = binarizer_(observed);
            sampler_.add(i, y, 1 - y);
        }
    }

    if (!all_good_ &&
        std::all_of(arms_.begin(), arms_.end(), [](const auto& a) { return a.good; })) {
        all_good_ = true;
        convergence_round_ = feedback.round;
    }
}

}  // namespace onum
