#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gridsched/runner.hpp"

namespace {

using gridsched::RunConfig;

// Flag overrides shared by run and compare; applied after the config file.
struct Overrides {
    std::string case_file, profiles, prices, config, out, strategy;
    double k = -1.0;
    std::int64_t seed = -1;
    bool no_reverse = false;
};

void add_common_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--case", o.case_file, "case file (bus/line/der CSV)");
    cmd.add_option("--profiles", o.profiles, "directory with load.csv, spv.csv, wt.csv");
    cmd.add_option("--prices", o.prices, "day-ahead price CSV");
    cmd.add_option("--config", o.config, "sectioned key=value config file");
    cmd.add_option("--seed", o.seed, "random seed");
    cmd.add_option("--out", o.out, "output directory");
    cmd.add_option("--k", o.k, "uncertainty spread coefficient");
    cmd.add_flag("--no-reverse-constraint", o.no_reverse, "allow back-feed to the grid");
}

RunConfig make_config(const Overrides& o) {
    RunConfig cfg;
    if (!o.config.empty()) gridsched::apply_config_file(cfg, o.config);
    if (!o.case_file.empty()) cfg.case_file = o.case_file;
    if (!o.profiles.empty()) cfg.profiles_dir = o.profiles;
    if (!o.prices.empty()) cfg.prices_file = o.prices;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (!o.strategy.empty()) cfg.strategy = o.strategy;
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (o.k > 0.0) cfg.k = o.k;
    if (o.no_reverse) cfg.reverse_constraint = false;
    return cfg;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const gridsched::ConvergenceError*>(&e)) return 2;
    if (dynamic_cast<const gridsched::AccountingError*>(&e)) return 3;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day-ahead coordinated scheduling of utility storage and microturbine"};
    app.require_subcommand(1);

    Overrides run_opts;
    CLI::App* run = app.add_subcommand("run", "optimize one day and write artifacts");
    add_common_flags(*run, run_opts);
    run->add_option("--strategy", run_opts.strategy, "mpas or fixed-window")
        ->check(CLI::IsMember({"mpas", "fixed-window"}));

    Overrides cmp_opts;
    std::string strategy_a = "mpas", strategy_b = "fixed-window";
    std::string config_a, config_b;
    CLI::App* cmp = app.add_subcommand("compare", "run two strategies on the same inputs");
    add_common_flags(*cmp, cmp_opts);
    cmp->add_option("--strategy-a", strategy_a, "strategy for run A");
    cmp->add_option("--strategy-b", strategy_b, "strategy for run B");
    cmp->add_option("--config-a", config_a, "config file for run A");
    cmp->add_option("--config-b", config_b, "config file for run B");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const RunConfig cfg = make_config(run_opts);
            const gridsched::DayResult result = gridsched::run_and_write(cfg);
            std::printf("DPF = %.2f US$ (strategy %s, seed %llu)\n", result.report.dpf,
                        cfg.strategy.c_str(),
                        static_cast<unsigned long long>(cfg.seed));
            std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
            return 0;
        }
        RunConfig cfg_a = make_config(cmp_opts);
        RunConfig cfg_b = cfg_a;
        if (!config_a.empty()) gridsched::apply_config_file(cfg_a, config_a);
        if (!config_b.empty()) gridsched::apply_config_file(cfg_b, config_b);
        if (config_a.empty()) cfg_a.strategy = strategy_a;
        if (config_b.empty()) cfg_b.strategy = strategy_b;
        const gridsched::CompareResult result = gridsched::compare_runs(cfg_a, cfg_b);
        std::cout << result.text;
        if (!cfg_a.out_dir.empty()) {
            std::filesystem::create_directories(cfg_a.out_dir);
            std::ofstream out(cfg_a.out_dir + "/comparison.json");
            out << result.json << "\n";
            std::ofstream txt(cfg_a.out_dir + "/comparison.txt");
            txt << result.text;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
