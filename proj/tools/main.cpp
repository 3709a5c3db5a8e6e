#include <CLI11.hpp>
#include <string>

#include "ovp/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"1D variational obstacle problems: solve, verify, theory tables, "
                 "Dini tests, parameter sweeps and plots"};
    app.require_subcommand(1);

    std::string scenario;
    ovp::RunFlags flags;
    std::string out_dir;
    long seed = -1;
    double perturb = 0;
    bool has_perturb = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", scenario, "scenario file (ini-style)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides scenario)");
        sub->add_option("--jobs", flags.jobs, "parallel jobs for sweep")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "seed override");
        sub->add_option("--inject-perturbation", perturb,
                        "perturb the solution by EPS before verification")
            ->each([&](const std::string&) { has_perturb = true; });
    };

    for (const char* name : {"solve", "verify", "theory", "dini", "sweep", "plot"})
        add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (!out_dir.empty()) flags.out_dir = out_dir;
    if (seed >= 0) flags.seed = static_cast<std::uint64_t>(seed);
    if (has_perturb) flags.inject_perturbation = perturb;
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i) cmd += ' ';
        cmd += argv[i];
    }
    flags.command_line = cmd;

    const std::string sub = app.get_subcommands().front()->get_name();
    return ovp::run_subcommand(sub, scenario, flags);
}
