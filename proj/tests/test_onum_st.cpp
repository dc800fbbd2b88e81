#include <doctest.h>

#include <cmath>

#include "onum/environment.hpp"
#include "onum/onum_st.hpp"
#include "onum/oracle.hpp"

using namespace onum;

namespace {

OnumSt make(std::size_t k, double c, bool continuous = false) {
    OnumSt::Options o;
    o.num_arms = k;
    o.capacity = c;
    o.continuous_rewards = continuous;
    return OnumSt(o, PolicySeeds::for_repeat(1, 0));
}

RoundFeedback feedback(std::uint64_t round, std::size_t k) {
    return {round, std::vector<double>(k, 0.0), 0.0};
}

// One round in which `reward_arm` (if any selected arm) pays 1.
void play(OnumSt& p, std::uint64_t round, bool reward, std::size_t k) {
    p.select();
    auto fb = feedback(round, k);
    if (reward) fb.observed[p.last_selected().front()] = 1.0;
    p.update(fb);
}

}  // namespace

TEST_CASE("initial search state") {
    auto p = make(4, 1.0);
    const auto& s = p.search();
    CHECK(s.theta_set == std::vector<double>{0.25, 1.0 / 3.0, 0.5, 1.0});
    CHECK(s.lower == 0);
    CHECK(s.upper == 4);
    CHECK(s.current == 2);
    CHECK(s.served_arms() == 3);
    CHECK(s.w_delta == 29);
    CHECK_FALSE(p.converged());
    CHECK_FALSE(p.convergence_round().has_value());
    CHECK(p.name() == "onum-st");

    auto q = make(50, 20.0);
    CHECK(q.search().current == 25);
    CHECK(q.search().theta_set.back() == 20.0);
    CHECK(q.search().w_delta == 39);
    CHECK(make(2, 1.0).search().w_delta == 22);
}

TEST_CASE("select allocates the candidate to the top sampled arms") {
    auto p = make(50, 20.0);
    const auto x = p.select();
    CHECK(p.last_selected().size() == 26);
    int served = 0;
    for (double a : x.amounts) {
        if (a > 0.0) {
            CHECK(a == doctest::Approx(20.0 / 26.0));
            ++served;
        }
    }
    CHECK(served == 26);
    CHECK(x.feasible(20.0));
}

TEST_CASE("rewards move the upper end, W_delta silent rounds move the lower end") {
    auto p = make(4, 1.0);
    std::uint64_t t = 0;
    for (int i = 0; i < 28; ++i) play(p, ++t, false, 4);
    CHECK(p.search().current == 2);
    CHECK(p.search().consecutive_zero_rounds == 28);
    const auto before = p.sampler().posterior();
    play(p, ++t, false, 4);
    CHECK(p.search().lower == 2);
    CHECK(p.search().current == 3);
    CHECK(p.search().consecutive_zero_rounds == 0);
    for (long z : p.search().zero_streak) CHECK(z == 0);
    CHECK(p.sampler().posterior() == before);

    play(p, ++t, true, 4);
    CHECK(p.search().upper == 3);
    CHECK(p.search().current == 3);
    CHECK(p.converged());
    CHECK(p.theta_hat() == 0.5);
    CHECK(p.convergence_round() == t);
}

TEST_CASE("reward halves the interval downward") {
    auto p = make(4, 1.0);
    play(p, 1, true, 4);
    CHECK(p.search().upper == 2);
    CHECK(p.search().current == 1);
    CHECK_FALSE(p.converged());
    play(p, 2, true, 4);
    CHECK(p.converged());
    CHECK(p.theta_hat() == 0.25);
    CHECK(p.search().served_arms() == 4);
    CHECK(p.convergence_round() == 2);
}

TEST_CASE("zero streak is charged as failures when a reward arrives") {
    auto p = make(4, 1.0);
    // Three silent rounds, then a reward on one of the arms served every round.
    std::vector<long> served_count(4, 0);
    for (std::uint64_t t = 1; t <= 3; ++t) {
        p.select();
        for (auto i : p.last_selected()) ++served_count[i];
        p.update(feedback(t, 4));
    }
    const auto z = p.search().zero_streak;
    for (std::size_t i = 0; i < 4; ++i) CHECK(z[i] == served_count[i]);

    p.select();
    const auto sel = p.last_selected();
    auto fb = feedback(4, 4);
    fb.observed[sel.front()] = 1.0;
    p.update(fb);

    const auto& post = p.sampler().posterior();
    std::vector<char> in_sel(4, 0);
    for (auto i : sel) in_sel[i] = 1;
    for (std::size_t i = 0; i < 4; ++i) {
        const double events = post.successes[i] + post.failures[i] - 2.0;
        CHECK(events == static_cast<double>(z[i] + (in_sel[i] ? 1 : 0)));
    }
    CHECK(post.successes[sel.front()] == 2.0);
    CHECK(post.failures[sel.front()] == 1.0 + static_cast<double>(z[sel.front()]));
    for (long v : p.search().zero_streak) CHECK(v == 0);
}

TEST_CASE("converged policy updates only the served arms") {
    OnumSt::Options o;
    o.num_arms = 5;
    o.capacity = 1.0;
    auto p = OnumSt::with_known_threshold(o, 0.5, PolicySeeds::for_repeat(3, 0));
    CHECK(p.converged());
    CHECK(p.convergence_round() == 0);
    CHECK(p.name() == "mp-ts-known");
    CHECK(p.theta_hat() == 0.5);
    p.select();
    CHECK(p.last_selected().size() == 2);
    auto fb = feedback(1, 5);
    fb.observed[p.last_selected()[0]] = 1.0;
    p.update(fb);
    const auto& post = p.sampler().posterior();
    CHECK(post.successes[p.last_selected()[0]] == 2.0);
    CHECK(post.failures[p.last_selected()[0]] == 1.0);
    CHECK(post.failures[p.last_selected()[1]] == 2.0);
    double total = 0.0;
    for (std::size_t i = 0; i < 5; ++i) total += post.successes[i] + post.failures[i];
    CHECK(total == 12.0);
}

TEST_CASE("full capacity to a single arm") {
    OnumSt::Options o;
    o.num_arms = 6;
    o.capacity = 2.0;
    auto p = OnumSt::with_known_threshold(o, 2.0, {});
    const auto x = p.select();
    CHECK(p.last_selected().size() == 1);
    CHECK(x.total() == 2.0);
}

TEST_CASE("continuous rewards use W_delta = 1") {
    auto p = make(8, 2.0, true);
    CHECK(p.search().w_delta == 1);
    play(p, 1, false, 8);
    CHECK(p.search().lower == 4);
}

TEST_CASE("search depth is bounded by ceil(log2 K) phase changes") {
    for (std::size_t k : {2u, 3u, 7u, 16u, 50u, 101u}) {
        auto p = make(k, 1.0, true);
        Rng coin(k);
        int phases = 0;
        std::uint64_t t = 0;
        while (!p.converged()) {
            const auto width = p.search().upper - p.search().lower;
            play(p, ++t, coin.bernoulli(0.5), k);
            if (p.search().upper - p.search().lower < width) ++phases;
            REQUIRE(t < 1000);
        }
        CHECK(phases <= static_cast<int>(std::ceil(std::log2(static_cast<double>(k)))));
    }
}

TEST_CASE("simulation: rewards only above threshold, search converges to the equivalent") {
    ProblemInstance inst;
    inst.capacity = 20.0;
    for (int i = 0; i < 50; ++i) inst.mean_rewards.push_back(0.25 + i / 100.0);
    inst.thresholds.assign(50, 0.7);
    const auto target = allocation_equivalent_same(0.7, 20.0, 50).theta_hat;

    int hits = 0;
    for (std::uint64_t r = 0; r < 20; ++r) {
        OnumSt::Options o;
        o.num_arms = 50;
        o.capacity = 20.0;
        OnumSt p(o, PolicySeeds::for_repeat(5, r));
        Environment env(inst, stream_seed(5, r, StreamRole::Rewards));
        for (int t = 0; t < 400; ++t) {
            const auto x = p.select();
            const auto fb = env.step(x);
            for (std::size_t i = 0; i < 50; ++i) {
                if (fb.observed[i] > 0.0) CHECK(x.amounts[i] >= 0.7);
            }
            p.update(fb);
        }
        CHECK(p.converged());
        hits += p.theta_hat() == target;
    }
    CHECK(hits >= 18);
}

TEST_CASE("protocol violations") {
    auto p = make(4, 1.0);
    CHECK_THROWS_AS(p.update(feedback(1, 4)), ContractViolation);
    p.select();
    CHECK_THROWS_AS(p.select(), ContractViolation);
    CHECK_THROWS_AS(p.update(feedback(2, 4)), ContractViolation);
    CHECK_THROWS_AS(p.update(feedback(1, 3)), ContractViolation);
    CHECK_NOTHROW(p.update(feedback(1, 4)));
}

TEST_CASE("invalid construction") {
    CHECK_THROWS_AS(make(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make(4, 0.0), std::invalid_argument);
}

TEST_CASE("same seeds, same decisions") {
    auto a = make(10, 3.0), b = make(10, 3.0);
    for (std::uint64_t t = 1; t <= 50; ++t) {
        CHECK(a.select().amounts == b.select().amounts);
        a.update(feedback(t, 10));
        b.update(feedback(t, 10));
    }
    CHECK(a.search() == b.search());
}

TEST_CASE("top_arms breaks ties by index") {
    const std::vector<double> s{0.5, 0.9, 0.5, 0.9, 0.1};
    CHECK(top_arms(s, 3) == std::vector<ArmIndex>{1, 3, 0});
    CHECK(top_arms(s, 9).size() == 5);
    CHECK(top_arms(s, 0).empty());
}
