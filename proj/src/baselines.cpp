#include "onum/baselines.hpp"

#include <numeric>

namespace onum {

RandomFeasible::RandomFeasible(double capacity, std::vector<double> thresholds, std::uint64_t seed)
    : capacity_(capacity), thresholds_(std::move(thresholds)), rng_(seed) {}

Allocation RandomFeasible::select() {
    protocol_.on_select();
    const auto k = thresholds_.size();
    std::vector<ArmIndex> order(k);
    std::iota(order.begin(), order.end(), ArmIndex{0});
    for (std::size_t i = k; i > 1; --i) {
        std::swap(order[i - 1], order[rng_.below(i)]);
    }

    Allocation x = Allocation::zeros(k);
    double room = capacity_ + feasibility_tolerance(capacity_);
    for (ArmIndex i : order) {
        if (thresholds_[i] <= room) {
            x.amounts[i] = thresholds_[i];
            room -= thresholds_[i];
        }
    }
    return x;
}

void RandomFeasible::update(const RoundFeedback& feedback) {
    protocol_.on_update(feedback, thresholds_.size());
}

}  // namespace onum
