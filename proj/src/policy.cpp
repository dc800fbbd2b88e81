#include "onum/policy.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "onum/environment.hpp"

namespace onum {

std::vector<double> ThompsonSampler::sample() {
    if (pinned_) return *pinned_;
    std::vector<double> draws(posterior_.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        draws[i] = rng_.beta(posterior_.successes[i], posterior_.failures[i]);
    }
    return draws;
}

int RewardBinarizer::operator()(double observed) {
    if (continuous_) return binarize(observed, rng_);
    return observed > 0.0 ? 1 : 0;
}

void RoundProtocol::on_select() {
    if (pending_) throw ContractViolation("select() called twice without update()");
    pending_ = true;
}

void RoundProtocol::on_update(const RoundFeedback& feedback, std::size_t num_arms) {
    if (!pending_) throw ContractViolation("update() without a preceding select()");
    if (feedback.round != completed_ + 1) {
        throw ContractViolation("feedback round mismatch: expected round " +
                                std::to_string(completed_ + 1) + ", got " +
                                std::to_string(feedback.round));
    }
    if (feedback.observed.size() != num_arms) {
        throw ContractViolation("feedback has " + std::to_string(feedback.observed.size()) +
                                " entries for " + std::to_string(num_arms) + " arms");
    }
    pending_ = false;
    ++completed_;
}

std::vector<ArmIndex> top_arms(std::span<const double> scores, std::size_t count) {
    std::vector<ArmIndex> order(scores.size());
    std::iota(order.begin(), order.end(), ArmIndex{0});
    count = std::min(count, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count),
                      order.end(), [&](ArmIndex a, ArmIndex b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    order.resize(count);
    return order;
}

}  // namespace onum
