#include <iostream>

#include <CLI11.hpp>

#include "isac/error.hpp"
#include "isac/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Multi-user OFDM ranging: closed-form and Monte Carlo correlation sidelobes"};
    app.require_subcommand(1);
    app.footer(
        "alpha_db is the amplitude ratio of user 2 to user 1 in dB (alpha = 10^(alpha_db/20));\n"
        "use -inf to switch user 2 off. Every other dB value is 10*log10 of an energy.");

    isac::RunOptions opt;
    std::string config;
    int trials = 0;
    std::uint64_t seed = 0;
    std::string out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "key = value configuration file")->required();
        sub->add_option("--trials", trials, "Monte Carlo trials (overrides config)")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "master seed (overrides config)");
        sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "output path prefix (overrides out_prefix)");
    };
    CLI::App* acf = app.add_subcommand("acf", "expected squared correlation per lag, analytic and Monte Carlo");
    CLI::App* sweep = app.add_subcommand("sweep", "EISL over a sweep axis, analytic and Monte Carlo");
    CLI::App* validate = app.add_subcommand("validate", "check the closed forms against Monte Carlo");
    for (CLI::App* sub : {acf, sweep, validate}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--trials")) opt.trials = trials;
    if (cmd->count("--seed")) opt.seed = seed;
    if (cmd->count("--out")) opt.out = out;

    try {
        const isac::ExperimentConfig cfg = isac::apply_overrides(isac::load_config(config), opt);
        if (cmd == acf) {
            for (const auto& path : isac::run_acf(cfg, opt.workers)) std::cerr << "wrote " << path << '\n';
            return 0;
        }
        if (cmd == sweep) {
            std::cerr << "wrote " << isac::run_sweep(cfg, opt.workers) << '\n';
            return 0;
        }
        return isac::run_validate(cfg, opt.workers, std::cout) ? 0 : 1;
    } catch (const isac::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
