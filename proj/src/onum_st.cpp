#include "onum/onum_st.hpp"

#include <stdexcept>

#include "onum/oracle.hpp"

namespace onum {

OnumSt::OnumSt(const Options& options, PolicySeeds seeds) : OnumSt(options, seeds, false) {}

OnumSt::OnumSt(const Options& options, PolicySeeds seeds, bool known)
    : options_(options),
      known_(known),
      sampler_(options.num_arms, seeds.sampling),
      binarizer_(options.continuous_rewards, seeds.binarization),
      in_selected_(options.num_arms, 0) {
    const auto k = options.num_arms;
    if (k < 1) throw std::invalid_argument("onum-st: need at least one arm");
    if (!(options.capacity > 0.0)) throw std::invalid_argument("onum-st: capacity must be positive");
    search_.theta_set = same_threshold_candidates(options.capacity, k);
    search_.zero_streak.assign(k, 0);
    if (known) return;

    if (k < 2) throw std::invalid_argument("onum-st: the threshold search needs K >= 2");
    search_.w_delta = options.continuous_rewards
                          ? 1
                          : w_delta_st(k, options.delta, options.epsilon);
    search_.lower = 0;
    search_.upper = k;
    search_.current = (k + 1) / 2;
}

OnumSt OnumSt::with_known_threshold(const Options& options, double theta_hat_s,
                                    PolicySeeds seeds) {
    OnumSt policy(options, seeds, true);
    const auto eq = allocation_equivalent_same(theta_hat_s, options.capacity, options.num_arms);
    const std::size_t position = options.num_arms - eq.m_arms + 1;
    policy.search_.lower = position;
    policy.search_.upper = position;
    policy.search_.current = position;
    policy.convergence_round_ = 0;
    return policy;
}

Allocation OnumSt::select() {
    protocol_.on_select();
    const double amount = search_.theta_hat();
    const auto samples = sampler_.sample();
    selected_ = top_arms(samples, search_.served_arms());

    Allocation x = Allocation::zeros(options_.num_arms);
    std::fill(in_selected_.begin(), in_selected_.end(), 0);
    for (ArmIndex i : selected_) {
        x.amounts[i] = amount;
        in_selected_[i] = 1;
    }
    return x;
}

void OnumSt::update(const RoundFeedback& feedback) {
    protocol_.on_update(feedback, options_.num_arms);
    if (search_.converged()) {
        update_converged(feedback);
    } else {
        update_searching(feedback);
    }
}

void OnumSt::update_converged(const RoundFeedback& feedback) {
    for (ArmIndex i : selected_) {
        const int y = binarizer_(feedback.observed[i]);
        sampler_.add(i, y, 1 - y);
    }
}

void OnumSt::update_searching(const RoundFeedback& feedback) {
    auto& s = search_;
    bool any_reward = false;
    for (ArmIndex i : selected_) any_reward = any_reward || feedback.observed[i] > 0.0;

    if (any_reward) {
        // Reward at candidate j: j serves every arm, so search below it.
        s.upper = s.current;
        s.current = s.upper - (s.upper - s.lower) / 2;
        s.consecutive_zero_rounds = 0;
        for (ArmIndex i = 0; i < options_.num_arms; ++i) {
            if (in_selected_[i]) {
                const int y = binarizer_(feedback.observed[i]);
                sampler_.add(i, y, 1 - y + s.zero_streak[i]);
            } else {
                sampler_.add(i, 0, s.zero_streak[i]);
            }
            s.zero_streak[i] = 0;
        }
    } else {
        ++s.consecutive_zero_rounds;
        for (ArmIndex i : selected_) ++s.zero_streak[i];
        if (s.consecutive_zero_rounds == s.w_delta) {
            // Under-allocation accepted with confidence 1 - delta.
            s.lower = s.current;
            s.current = s.lower + (s.upper - s.lower + 1) / 2;
            s.consecutive_zero_rounds = 0;
            std::fill(s.zero_streak.begin(), s.zero_streak.end(), 0);
        }
    }
    if (s.converged()) convergence_round_ = feedback.round;
}

}  // namespace onum
