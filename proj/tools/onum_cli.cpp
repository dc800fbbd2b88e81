#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onum/config_io.hpp"
#include "onum/harness.hpp"
#include "onum/oracle.hpp"

namespace fs = std::filesystem;
using namespace onum;

namespace {

struct CommonOptions {
    std::string instance = "1";
    std::optional<std::string> algorithm;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> repeats;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;
    std::optional<double> epsilon;
    std::optional<double> gamma;
    std::optional<std::string> reward;
    std::optional<double> halfwidth;
    std::optional<std::string> label;
    std::string out = ".";
    unsigned threads = 0;
};

void add_instance_option(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--instance", o.instance, "built-in instance id (1|2|3) or a JSON config file")
        ->capture_default_str();
}

void add_run_options(CLI::App& cmd, CommonOptions& o) {
    add_instance_option(cmd, o);
    cmd.add_option("--algorithm", o.algorithm, "onum-st|onum-dt|mp-ts-known|cts-known|random");
    cmd.add_option("--horizon", o.horizon, "rounds per repeat");
    cmd.add_option("--repeats", o.repeats, "independent repeats");
    cmd.add_option("--seed", o.seed, "base seed");
    cmd.add_option("--delta", o.delta);
    cmd.add_option("--epsilon", o.epsilon);
    cmd.add_option("--gamma", o.gamma);
    cmd.add_option("--reward", o.reward, "bernoulli|uniform")
        ->check(CLI::IsMember({"bernoulli", "uniform"}));
    cmd.add_option("--halfwidth", o.halfwidth, "uniform reward halfwidth (default 0.1)");
    cmd.add_option("--label", o.label, "output file prefix");
    cmd.add_option("--out", o.out, "output directory")->capture_default_str();
    cmd.add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();
}

ExperimentConfig resolve_instance(const std::string& arg) {
    if (arg == "1" || arg == "2" || arg == "3") return builtin_instance(std::stoi(arg));
    std::ifstream in(arg);
    if (!in) throw ConfigError("'" + arg + "' is neither a built-in id (1|2|3) nor a readable file");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(arg + ": " + e.what());
    }
    if (j.is_object() && j.contains("instance")) {
        auto c = config_from_json(j);
        if (c.label.empty()) c.label = fs::path(arg).stem().string();
        return c;
    }
    ExperimentConfig c;
    c.instance = instance_from_json(j);
    c.label = fs::path(arg).stem().string();
    return c;
}

ExperimentConfig build_config(const CommonOptions& o) {
    ExperimentConfig c = resolve_instance(o.instance);
    if (o.algorithm) c.algorithm = algorithm_from_string(*o.algorithm);
    if (o.horizon) c.horizon = *o.horizon;
    if (o.repeats) c.repeats = *o.repeats;
    if (o.seed) c.base_seed = *o.seed;
    if (o.delta) c.delta = *o.delta;
    if (o.epsilon) c.epsilon = *o.epsilon;
    if (o.gamma) c.gamma = *o.gamma;
    if (o.reward) {
        c.instance.reward = *o.reward == "uniform" ? RewardModel::uniform(o.halfwidth.value_or(0.1))
                                                   : RewardModel::bernoulli();
    } else if (o.halfwidth && c.instance.reward.continuous()) {
        c.instance.reward.halfwidth = *o.halfwidth;
    }
    if (o.label) c.label = *o.label;
    if (c.label.empty()) c.label = "experiment";
    return c;
}

std::string reward_name(const RewardModel& r) { return r.continuous() ? "uniform" : "bernoulli"; }

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string file_stem(const ExperimentConfig& c, const std::string& variant) {
    std::string stem = c.label + "_" + to_string(c.algorithm) + "_" + reward_name(c.instance.reward);
    if (!variant.empty()) stem += "_" + variant;
    return stem;
}

void run_and_write(const ExperimentConfig& config, const std::string& variant,
                   const fs::path& out_dir, unsigned threads) {
    validate_config(config);
    for (const auto& w : config_warnings(config)) std::cerr << "warning: " << w << '\n';

    const auto trace = run_experiment(config, threads);

    fs::create_directories(out_dir);
    const auto stem = file_stem(config, variant);
    const auto csv_path = out_dir / (stem + ".csv");
    const auto meta_path = out_dir / (stem + ".meta.json");
    {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
        write_trace_csv(csv, trace);
    }
    {
        std::ofstream meta(meta_path, std::ios::binary);
        if (!meta) throw std::runtime_error("cannot write " + meta_path.string());
        write_metadata(meta, config, trace);
    }
    std::size_t converged = 0;
    for (const auto& r : trace.convergence_rounds) converged += r.has_value();
    std::printf("%s: final mean regret %.6g [%.6g, %.6g], converged %zu/%llu\n",
                csv_path.string().c_str(), trace.mean_regret.back(), trace.ci_low.back(),
                trace.ci_high.back(), converged,
                static_cast<unsigned long long>(trace.n_repeats));
}

struct SweepPreset {
    std::string instance;
    std::string vary;
    std::vector<double> values;
};

SweepPreset preset(const std::string& name) {
    if (name == "fig1") return {"1", "capacity", {10, 20, 30}};
    if (name == "fig2") return {"1", "theta", {0.5, 0.7, 0.9}};
    if (name == "fig3") return {"2", "capacity", {1.5, 2, 2.5}};
    if (name == "fig4") return {"3", "capacity", {2.5, 3, 3.5}};
    throw ConfigError("unknown preset '" + name + "' (expected fig1..fig4)");
}

int cmd_sweep(CommonOptions o, std::optional<std::string> preset_name, std::string vary,
              std::vector<double> values) {
    std::vector<std::string> rewards;
    if (preset_name) {
        const auto p = preset(*preset_name);
        o.instance = p.instance;
        vary = p.vary;
        values = p.values;
        if (o.reward) {
            rewards = {*o.reward};
        } else {
            rewards = {"bernoulli", "uniform"};
        }
    } else {
        rewards = {o.reward.value_or("")};
    }
    if (vary != "capacity" && vary != "theta") {
        throw ConfigError("--vary must be 'capacity' or 'theta'");
    }
    if (values.empty()) throw ConfigError("sweep needs --values or --preset");

    for (const auto& reward : rewards) {
        CommonOptions cell = o;
        if (!reward.empty()) cell.reward = reward;
        ExperimentConfig base = build_config(cell);
        // Uniform runs on the different-threshold instances need more repeats to separate CIs.
        if (preset_name && !o.repeats && base.instance.reward.continuous() &&
            (o.instance == "2" || o.instance == "3")) {
            base.repeats = 200;
        }
        for (double v : values) {
            ExperimentConfig c = base;
            std::string variant;
            if (vary == "capacity") {
                c.instance.capacity = v;
                variant = "C" + format_number(v);
            } else {
                c.instance.thresholds.assign(c.instance.num_arms(), v);
                variant = "theta" + format_number(v);
            }
            validate_instance(c.instance);
            run_and_write(c, variant, o.out, o.threads);
        }
    }
    return 0;
}

void print_list(const char* key, const std::vector<double>& v) {
    std::printf("%-22s", key);
    for (double x : v) std::printf(" %.10g", x);
    std::printf("\n");
}

int cmd_oracle(const CommonOptions& o) {
    const ExperimentConfig c = build_config(o);
    const auto& inst = c.instance;
    const auto k = inst.num_arms();
    const auto sol = solve_knapsack(inst.mean_rewards, inst.thresholds, inst.capacity);

    std::printf("%-22s %zu\n", "arms", k);
    std::printf("%-22s %.10g\n", "capacity", inst.capacity);
    std::printf("%-22s", "optimal_arms");
    for (auto i : sol.selected) std::printf(" %zu", i);
    std::printf("\n");
    print_list("optimal_allocation", sol.allocation(inst.thresholds).amounts);
    std::printf("%-22s %.12g\n", "optimal_value", sol.total_value);
    std::printf("%-22s %.12g\n", "leftover", sol.leftover);
    std::printf("%-22s %.12g\n", "gamma_star", sol.gamma_star);
    std::printf("%-22s %.12g\n", "max_gap", max_gap(inst.mean_rewards, inst.thresholds, inst.capacity));
    std::printf("%-22s %zu\n", "k_max", max_superarm_size(inst.thresholds, inst.capacity));
    std::printf("%-22s %zu\n", "k_star",
                min_optimal_superarm_size(inst.mean_rewards, inst.thresholds, inst.capacity));

    const bool same = std::adjacent_find(inst.thresholds.begin(), inst.thresholds.end(),
                                         std::not_equal_to<>()) == inst.thresholds.end();
    if (same && inst.capacity > 0.0) {
        const auto eq = allocation_equivalent_same(inst.thresholds.front(), inst.capacity, k);
        std::printf("%-22s %zu\n", "equivalent_arms", eq.m_arms);
        std::printf("%-22s %.12g\n", "equivalent_threshold", eq.theta_hat);
        try {
            std::printf("%-22s %.10g\n", "lower_bound_constant",
                        lower_bound_constant(inst.mean_rewards, eq.m_arms));
        } catch (const std::invalid_argument& e) {
            std::printf("%-22s undefined (%s)\n", "lower_bound_constant", e.what());
        }
    }
    const bool continuous = inst.reward.continuous();
    if (k >= 2) {
        std::printf("%-22s %ld (formula %.6g)%s\n", "w_delta_st", w_delta_st(k, c.delta, c.epsilon),
                    w_delta_st_formula(k, c.delta, c.epsilon),
                    continuous ? ", 1 under continuous rewards" : "");
    }
    if (inst.capacity > 0.0 && c.gamma > 0.0) {
        std::printf("%-22s %ld (formula %.6g)%s\n", "w_delta_dt",
                    w_delta_dt(k, inst.capacity, c.gamma, c.delta, c.epsilon),
                    w_delta_dt_formula(k, inst.capacity, c.gamma, c.delta, c.epsilon),
                    continuous ? ", 1 under continuous rewards" : "");
    }
    return 0;
}

int cmd_instances(const std::string& out) {
    fs::create_directories(out);
    for (int id = 1; id <= 3; ++id) {
        const auto c = builtin_instance(id);
        const auto path = fs::path(out) / (c.label + ".json");
        save_config(c, path);
        std::printf("%s\n", path.string().c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online network utility maximization: simulation and regret experiments"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "run one configuration, write CSV and metadata sidecar");
    add_run_options(*run, run_opts);

    CommonOptions sweep_opts;
    std::optional<std::string> sweep_preset;
    std::string sweep_vary = "capacity";
    std::vector<double> sweep_values;
    auto* sweep = app.add_subcommand("sweep", "run one configuration per capacity or threshold value");
    add_run_options(*sweep, sweep_opts);
    sweep->add_option("--vary", sweep_vary, "capacity|theta")->capture_default_str();
    sweep->add_option("--values", sweep_values, "values of the varied parameter")->delimiter(',');
    sweep->add_option("--preset", sweep_preset, "fig1|fig2|fig3|fig4");

    CommonOptions oracle_opts;
    auto* oracle = app.add_subcommand("oracle", "print the offline optimum and diagnostics");
    add_run_options(*oracle, oracle_opts);

    std::string instances_out = ".";
    auto* instances = app.add_subcommand("instances", "write the built-in instances as JSON configs");
    instances->add_option("--out", instances_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            const auto config = build_config(run_opts);
            run_and_write(config, "", run_opts.out, run_opts.threads);
            return 0;
        }
        if (*sweep) return cmd_sweep(sweep_opts, sweep_preset, sweep_vary, sweep_values);
        if (*oracle) return cmd_oracle(oracle_opts);
        if (*instances) return cmd_instances(instances_out);
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
