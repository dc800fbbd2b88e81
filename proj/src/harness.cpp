#include "onum/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "onum/baselines.hpp"
#include "onum/config_io.hpp"
#include "onum/environment.hpp"
#include "onum/oracle.hpp"

#ifndef ONUM_BUILD_COMMIT
#define ONUM_BUILD_COMMIT "unknown"
#endif

namespace onum {

namespace {

bool all_equal(std::span<const double> v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

double same_threshold_of(const ExperimentConfig& config) {
    if (config.known_thresholds) return config.known_thresholds->front();
    const auto& theta = config.instance.thresholds;
    if (!all_equal(theta)) {
        throw ConfigError("mp-ts-known needs identical thresholds or an explicit known_thresholds");
    }
    return theta.front() > 0.0 ? theta.front()
                               : config.instance.capacity / static_cast<double>(theta.size());
}

constexpr const char* kCsvHeader = "round,mean_regret,ci_low,ci_high";

}  // namespace

std::unique_ptr<Policy> make_policy(const ExperimentConfig& config, std::uint64_t repeat_index) {
    const auto& inst = config.instance;
    const auto k = inst.num_arms();
    const bool continuous = inst.reward.continuous();
    const auto seeds = PolicySeeds::for_repeat(config.base_seed, repeat_index);

    try {
        switch (config.algorithm) {
            case Algorithm::OnumSt: {
                OnumSt::Options o{k, inst.capacity, config.effective_delta(), config.epsilon,
                                  continuous};
                return std::make_unique<OnumSt>(o, seeds);
            }
            case Algorithm::OnumDt: {
                OnumDt::Options o{k,          inst.capacity, config.effective_delta(),
                                  config.epsilon, config.gamma, continuous};
                return std::make_unique<OnumDt>(o, seeds);
            }
            case Algorithm::MpTsKnown:
                return std::make_unique<OnumSt>(make_mp_ts_known(
                    k, inst.capacity, same_threshold_of(config), continuous, seeds));
            case Algorithm::CtsKnown:
                return std::make_unique<OnumDt>(make_cts_known(
                    k, inst.capacity, config.known_thresholds.value_or(inst.thresholds),
                    continuous, seeds));
            case Algorithm::RandomBaseline:
                return std::make_unique<RandomFeasible>(
                    inst.capacity, inst.thresholds,
                    stream_seed(config.base_seed, repeat_index, StreamRole::Baseline));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unsupported algorithm");
}

RegretTrace run_single(const ExperimentConfig& config, std::uint64_t repeat_index,
                       const RoundObserver& observer) {
    validate_config(config);
    const auto& inst = config.instance;
    const double optimum =
        solve_knapsack(inst.mean_rewards, inst.thresholds, inst.capacity).total_value;

    Environment env(inst, stream_seed(config.base_seed, repeat_index, StreamRole::Rewards));
    auto policy = make_policy(config, repeat_index);

    RegretTrace trace;
    trace.cumulative.reserve(config.horizon);
    double cumulative = 0.0;
    for (std::uint64_t t = 1; t <= config.horizon; ++t) {
        try {
            const Allocation x = policy->select();
            const RoundFeedback feedback = env.step(x);
            const double regret = optimum - mean_reward_of_allocation(inst, x);
            if (regret < -kValueTolerance) {
                throw ContractViolation("allocation beats the knapsack optimum");
            }
            cumulative += std::max(0.0, regret);
            policy->update(feedback);
            trace.cumulative.push_back(cumulative);
            if (observer) observer(RoundContext{t, inst, *policy, x, feedback, cumulative});
        } catch (const ContractViolation& e) {
            throw ContractViolation(std::string(policy->name()) + ", repeat " +
                                    std::to_string(repeat_index) + ", round " +
                                    std::to_string(t) + ": " + e.what());
        }
    }
    trace.convergence_round = policy->convergence_round();
    return trace;
}

AggregateTrace aggregate(std::span<const RegretTrace> traces) {
    if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
    const auto rounds = traces.front().cumulative.size();
    for (const auto& tr : traces) {
        if (tr.cumulative.size() != rounds) {
            throw std::invalid_argument("aggregate: traces have different lengths");
        }
    }
    const auto n = traces.size();
    double q = 0.0;
    if (n >= 30) {
        q = 1.96;
    } else if (n >= 2) {
        boost::math::students_t dist(static_cast<double>(n - 1));
        q = boost::math::quantile(boost::math::complement(dist, 0.025));
    }

    AggregateTrace agg;
    agg.n_repeats = n;
    agg.mean_regret.resize(rounds);
    agg.ci_low.resize(rounds);
    agg.ci_high.resize(rounds);
    for (std::size_t t = 0; t < rounds; ++t) {
        double sum = 0.0;
        for (const auto& tr : traces) sum += tr.cumulative[t];
        const double mean = sum / static_cast<double>(n);
        double half = 0.0;
        if (n >= 2) {
            double ss = 0.0;
            for (const auto& tr : traces) ss += (tr.cumulative[t] - mean) * (tr.cumulative[t] - mean);
            const double sd = std::sqrt(ss / static_cast<double>(n - 1));
            half = q * sd / std::sqrt(static_cast<double>(n));
        }
        agg.mean_regret[t] = mean;
        agg.ci_low[t] = mean - half;
        agg.ci_high[t] = mean + half;
    }
    for (const auto& tr : traces) agg.convergence_rounds.push_back(tr.convergence_round);
    return agg;
}

AggregateTrace run_experiment(const ExperimentConfig& config, unsigned threads) {
    validate_config(config);
    const auto n = config.repeats;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n));

    std::vector<RegretTrace> traces(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (auto r = next.fetch_add(1); r < n; r = next.fetch_add(1)) {
            try {
                traces[r] = run_single(config, r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return aggregate(traces);
}

ExperimentConfig builtin_instance(int id) {
    ExperimentConfig c;
    c.horizon = 10000;
    c.repeats = 50;
    c.delta = 0.1;
    c.epsilon = 0.1;
    c.gamma = 1e-3;
    switch (id) {
        case 1: {
            c.label = "instance1";
            c.algorithm = Algorithm::OnumSt;
            c.instance.capacity = 20.0;
            for (int i = 0; i < 50; ++i) c.instance.mean_rewards.push_back(0.25 + i / 100.0);
            c.instance.thresholds.assign(50, 0.7);
            break;
        }
        case 2:
            c.label = "instance2";
            c.algorithm = Algorithm::OnumDt;
            c.instance.capacity = 2.0;
            c.instance.mean_rewards = {0.9, 0.89, 0.87, 0.6, 0.3};
            c.instance.thresholds = {0.7, 0.7, 0.7, 0.6, 0.35};
            break;
        case 3:
            c.label = "instance3";
            c.algorithm = Algorithm::OnumDt;
            c.instance.capacity = 3.0;
            c.instance.mean_rewards = {0.9, 0.8, 0.42, 0.6, 0.5, 0.2, 0.11, 0.7, 0.3, 0.98};
            c.instance.thresholds = {0.6, 0.55, 0.3, 0.46, 0.34, 0.2, 0.07, 0.3, 0.25, 0.8};
            break;
        default:
            throw ConfigError("unknown built-in instance " + std::to_string(id) +
                              " (expected 1, 2 or 3)");
    }
    return c;
}

LogFit fit_log_growth(std::span<const double> cumulative, double burn_in_fraction) {
    const auto total = cumulative.size();
    if (total < 100) throw std::invalid_argument("fit_log_growth: need at least 100 rounds");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw std::invalid_argument("fit_log_growth: burn-in fraction must lie in [0,1)");
    }
    const auto first = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(burn_in_fraction * static_cast<double>(total))));

    double sx = 0.0, sy = 0.0;
    const auto n = static_cast<double>(total - first + 1);
    for (std::size_t t = first; t <= total; ++t) {
        sx += std::log(static_cast<double>(t));
        sy += cumulative[t - 1];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t t = first; t <= total; ++t) {
        const double dx = std::log(static_cast<double>(t)) - mx;
        const double dy = cumulative[t - 1] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (syy == 0.0 || sxx == 0.0) {
        throw std::invalid_argument("fit_log_growth: regret is constant over the fit window");
    }
    LogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (sxy * sxy) / (sxx * syy);
    return fit;
}

void write_trace_csv(std::ostream& out, const AggregateTrace& trace) {
    out << kCsvHeader << '\n';
    char line[128];
    for (std::size_t t = 0; t < trace.rounds(); ++t) {
        std::snprintf(line, sizeof line, "%zu,%.12g,%.12g,%.12g\n", t + 1, trace.mean_regret[t],
                      trace.ci_low[t], trace.ci_high[t]);
        out << line;
    }
}

AggregateTrace read_trace_csv(std::istream& in) {
    static const char* columns[] = {"round", "mean_regret", "ci_low", "ci_high"};
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("trace CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw ConfigError("trace CSV header is '" + line + "', expected '" + kCsvHeader + "'");
    }
    AggregateTrace trace;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::stringstream ss(line);
        std::string cell;
        double values[4];
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= 4) throw ConfigError("line " + std::to_string(row + 1) + ": too many columns");
            char* end = nullptr;
            values[col] = std::strtod(cell.c_str(), &end);
            if (cell.empty() || *end != '\0') {
                throw ConfigError("line " + std::to_string(row + 1) + ": column '" + columns[col] +
                                  "' is not a number: '" + cell + "'");
            }
            ++col;
        }
        if (col != 4) {
            throw ConfigError("line " + std::to_string(row + 1) + ": missing column '" +
                              columns[col] + "'");
        }
        if (values[0] != static_cast<double>(row)) {
            throw ConfigError("line " + std::to_string(row + 1) + ": column 'round' out of sequence");
        }
        trace.mean_regret.push_back(values[1]);
        trace.ci_low.push_back(values[2]);
        trace.ci_high.push_back(values[3]);
    }
    return trace;
}

std::vector<std::string> config_warnings(const ExperimentConfig& config) {
    std::vector<std::string> out;
    const auto& inst = config.instance;
    const bool searching =
        config.algorithm == Algorithm::OnumSt || config.algorithm == Algorithm::OnumDt;
    if (searching && inst.reward.continuous()) {
        for (std::size_t i = 0; i < inst.num_arms(); ++i) {
            if (inst.mean_rewards[i] <= inst.reward.halfwidth) {
                out.push_back("arm " + std::to_string(i) +
                              ": mean reward <= uniform halfwidth, so a served arm can report 0; "
                              "W_delta = 1 is unsound for this instance");
            }
        }
    }
    if (searching && !inst.reward.continuous()) {
        const double min_mu = *std::min_element(inst.mean_rewards.begin(), inst.mean_rewards.end());
        if (config.epsilon > min_mu) {
            out.push_back("epsilon exceeds the smallest mean reward; the search confidence "
                          "1 - delta is not guaranteed");
        }
    }
    if (config.algorithm == Algorithm::OnumSt && !all_equal(inst.thresholds)) {
        out.push_back("onum-st assumes identical thresholds; this instance has different ones");
    }
    if (config.algorithm == Algorithm::OnumDt) {
        const auto sol = solve_knapsack(inst.mean_rewards, inst.thresholds, inst.capacity);
        if (sol.gamma_star <= 0.0) {
            out.push_back("optimal packing leaves no slack (gamma* = 0): estimates within gamma "
                          "of the thresholds need not be allocation equivalent");
        } else if (config.gamma > sol.gamma_star) {
            out.push_back("gamma exceeds the slack per arm gamma* = " +
                          std::to_string(sol.gamma_star) +
                          "; estimates within gamma need not be allocation equivalent");
        }
    }
    return out;
}

void write_metadata(std::ostream& out, const ExperimentConfig& config, const AggregateTrace& trace) {
    nlohmann::json meta;
    meta["config"] = to_json(config);
    meta["seed"] = config.base_seed;
    meta["commit"] = build_commit();
    meta["effective_delta"] = config.effective_delta();

    nlohmann::json rounds = nlohmann::json::array();
    std::uint64_t converged = 0;
    for (const auto& r : trace.convergence_rounds) {
        if (r) {
            rounds.push_back(*r);
            ++converged;
        } else {
            rounds.push_back(nullptr);
        }
    }
    meta["convergence"] = {{"repeats", trace.n_repeats}, {"converged", converged},
                           {"rounds", rounds}};
    if (trace.rounds() > 0) {
        meta["final"] = {{"mean_regret", trace.mean_regret.back()},
                         {"ci_low", trace.ci_low.back()},
                         {"ci_high", trace.ci_high.back()}};
    }
    meta["warnings"] = config_warnings(config);
    out << meta.dump(2) << '\n';
}

std::string build_commit() { return ONUM_BUILD_COMMIT; }

}  // namespace onum
