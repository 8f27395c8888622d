// qwalk: compile, run and check perfect-transfer schedules for lackadaisical
// quantum walks.

#include <string>

#include "CLI11.hpp"
#include "qwalk/cli.hpp"

int main(int argc, char** argv) {
    using qwalk::cli::Command;
    qwalk::cli::RunConfig cfg;

    CLI::App app{"Exact lackadaisical quantum-walk state transfer and routing"};
    app.require_subcommand(1);

    auto add_seed = [&](CLI::App* sub) {
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { cfg.seed = s; }, "RNG seed (falls back to $QWALK_SEED, then 0)");
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option_function<std::string>(
            "-o,--out", [&](const std::string& s) { cfg.out_path = s; }, "Write output here instead of stdout");
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option_function<std::string>(
            "--input", [&](const std::string& s) { cfg.input = s; },
            "Coin amplitudes as JSON, e.g. '[0.6, [0, 0.8]]'; random when omitted");
        sub->add_option_function<std::string>(
            "--input-file", [&](const std::string& s) { cfg.input_file = s; }, "File holding the amplitude JSON");
    };

    auto* compile = app.add_subcommand("compile", "Emit the closed-form schedule for (d, n, p)");
    compile->add_option("--d", cfg.d, "Coin dimension")->required();
    compile->add_option("--n", cfg.n, "Number of steps")->required();
    compile->add_option("--p", cfg.p, "Target site (nonzero)")->required();
    add_out(compile);

    auto* run = app.add_subcommand("run", "Evolve a coin state under a schedule file");
    run->add_option_function<std::string>(
           "--schedule", [&](const std::string& s) { cfg.schedule_path = s; }, "Schedule JSON")
        ->required();
    add_input(run);
    add_seed(run);
    add_out(run);
    run->add_flag("--trace", cfg.trace, "Emit one JSON line per step");

    auto* route = app.add_subcommand("route", "Route an m-qudit coin state to a lattice point");
    route->add_option("--d", cfg.d, "Coin dimension")->required();
    route->add_option("--targets", cfg.targets, "Target coordinates, comma separated")->required()->delimiter(',');
    route->add_option_function<int>(
        "--n", [&](int n) { cfg.n_opt = n; }, "Common step count (smallest feasible when omitted)");
    add_input(route);
    route->add_flag("--ghz", cfg.ghz, "Use sum_i |i...i>/sqrt(d) as the input");
    add_seed(route);
    add_out(route);
    route->add_flag("--trace", cfg.trace, "Emit one JSON line per step");
    route->add_option_function<std::string>(
        "--plan-out", [&](const std::string& s) { cfg.plan_out = s; }, "Also write the routing plan JSON here");

    auto* validate = app.add_subcommand("validate", "Check a schedule file by simulation");
    validate->add_option_function<std::string>(
                "--schedule", [&](const std::string& s) { cfg.schedule_path = s; }, "Schedule JSON")
        ->required();
    validate->add_option("--trials", cfg.trials, "Random inputs on top of the d basis inputs")
        ->check(CLI::NonNegativeNumber);
    add_seed(validate);
    add_out(validate);

    auto* count = app.add_subcommand("count-paths", "Count lazy-walk move sequences N(n, p)");
    count->add_option("--n", cfg.n, "Number of steps")->required();
    count->add_option("--p", cfg.p, "Net displacement")->required();
    bool no_enum = false;
    count->add_flag("--no-enumerate", no_enum, "Skip the enumeration cross-check");
    add_out(count);

    auto* sweep = app.add_subcommand("sweep", "Compare compiled and oracle schedules over a grid");
    sweep->add_option("--d-min", cfg.sweep.d_min);
    sweep->add_option("--d-max", cfg.sweep.d_max);
    sweep->add_option("--p-min", cfg.sweep.p_min, "Smallest |p|");
    sweep->add_option("--p-max", cfg.sweep.p_max, "Largest |p|");
    sweep->add_option_function<int>("--n-min", [&](int v) { cfg.sweep.n_min = v; }, "Absolute lower n");
    sweep->add_option_function<int>("--n-max", [&](int v) { cfg.sweep.n_max = v; }, "Absolute upper n");
    sweep->add_option("--n-extra", cfg.sweep.n_extra, "Steps beyond the minimal n when no n range is given");
    sweep->add_option("--trials", cfg.sweep.trials, "Random inputs per tuple")->check(CLI::NonNegativeNumber);
    sweep->add_option("--threads", cfg.sweep.threads, "Worker threads (0 = all cores)");
    add_seed(sweep);
    add_out(sweep);

    CLI11_PARSE(app, argc, argv);

    if (*compile) cfg.command = Command::compile;
    if (*run) cfg.command = Command::run;
    if (*route) cfg.command = Command::route;
    if (*validate) cfg.command = Command::validate;
    if (*count) {
        cfg.command = Command::count_paths;
        cfg.enumerate = !no_enum;
    }
    if (*sweep) cfg.command = Command::sweep;

    return qwalk::cli::run_command(cfg);
}
