#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mee/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Minimum error entropy estimation lab"};
    app.require_subcommand(0, 1);

    mee::CommandArgs args;
    std::string config, input, out;
    std::uint64_t seed = 0;
    bool self_test_flag = false;

    app.add_option("--config", config, "Experiment config (JSON)");
    app.add_option("--out", out, "Output directory for CSV artifacts");
    app.add_option("--seed", seed, "Seed fixing every stochastic choice");
    app.add_option("--jobs", args.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--input", input, "GridFunction CSV for rearrange");
    app.add_flag("--self-test", self_test_flag, "Run the invariant corpus without a config");

    for (const char* name : {"risk", "optimize", "verify-theorem", "rearrange", "approx", "self-test"}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        if (std::string(name) == "rearrange") sub->add_option("input", input, "GridFunction CSV");
    }
    app.get_subcommand("risk")->description("Evaluate risks of the configured error mixture");
    app.get_subcommand("optimize")->description("Search risk-optimal shift assignments");
    app.get_subcommand("verify-theorem")->description("Sweep perturbations around the median assignment");
    app.get_subcommand("rearrange")->description("Decreasing rearrangement of a GridFunction CSV");
    app.get_subcommand("approx")->description("Smoothing-sequence convergence diagnostics");
    app.get_subcommand("self-test")->description("Run the invariant corpus without a config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return mee::kExitConfig;
    }

    const auto subs = app.get_subcommands();
    if (!subs.empty())
        args.command = subs.front()->get_name();
    else if (self_test_flag)
        args.command = "self-test";
    else {
        std::cerr << app.help();
        return mee::kExitConfig;
    }
    if (!config.empty()) args.config = config;
    if (!input.empty()) args.input = input;
    if (!out.empty()) args.out_dir = out;
    if (app.count("--seed")) args.seed = seed;
    return mee::run_command(args, std::cout, std::cerr);
}
