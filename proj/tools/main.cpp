#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace dualprox;
using namespace dualprox::cli;

namespace {

struct Flags {
    RunConfig cfg;
    std::optional<std::string> config_file;
    std::optional<double> fixed_l, l0, eta;
    std::optional<std::string> step;
    std::optional<std::uint64_t> seed;
    bool print_config = false;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_file, "Load a key = value run configuration first");
    cmd->add_option("--problem", f.cfg.problem, "Builtin problem name or spec file path");
    cmd->add_option("--method", f.cfg.method, "dpg | fdpg | gfdpg");
    cmd->add_option("--schedule", f.cfg.schedule, "fista | poly | fixed_horizon (gfdpg only)");
    cmd->add_option("--a", f.cfg.a, "Parameter a of the poly schedule t_k = (k + a)/a");
    cmd->add_option("--N", f.cfg.horizon, "Horizon of the fixed_horizon schedule (default: --iters)");
    cmd->add_option("--step", f.step, "fixed | backtrack");
    cmd->add_option("--fixed-L", f.fixed_l, "Constant step L (default L_F)");
    cmd->add_option("--L0", f.l0, "Initial L for backtracking (default L_F/16)");
    cmd->add_option("--eta", f.eta, "Backtracking growth factor (default 2)");
    cmd->add_option("--iters", f.cfg.iters, "Maximum number of iterations");
    cmd->add_option("--tol", f.cfg.tol, "Stop when the prox-grad norm falls below this (0: never)");
    cmd->add_option("--y0", f.cfg.y0, "zero, or a file of comma/newline separated values");
    cmd->add_option("--seed", f.seed, "Seed for generated problems (fallback: DUALPROX_SEED, then 42)");
    cmd->add_option("--ref", f.cfg.ref, "auto | enumerate | longrun");
    cmd->add_option("--certs", f.cfg.certs, "all, or a comma list of certificate families");
    cmd->add_option("--out", f.cfg.out, "Output CSV path (default stdout)");
    cmd->add_option("--bound-scale", f.cfg.bound_scale, "Scale every certificate bound (fault injection)")
        ->group("");
    cmd->add_flag("--print-config", f.print_config, "Print the normalized configuration and exit");
}

/// Merges the optional flags into a config; a config file supplies the base.
RunConfig resolve(const Flags& f, const CLI::App* cmd) {
    RunConfig c = f.cfg;
    if (f.config_file) {
        RunConfig defaults;
        defaults.seed = seed_from_env();
        RunConfig base = apply_keys(defaults, KeyValues::load(*f.config_file));
        // Explicit flags win over file values.
        KeyValues overrides;
        auto given = [&](const char* flag) { return cmd->count(flag) > 0; };
        if (given("--problem")) overrides.set("problem", c.problem);
        if (given("--method")) overrides.set("method", c.method);
        if (given("--schedule")) overrides.set("schedule", c.schedule);
        if (given("--a")) overrides.set("a", format_double(c.a));
        if (given("--N")) overrides.set("N", std::to_string(c.horizon));
        if (given("--iters")) overrides.set("iters", std::to_string(c.iters));
        if (given("--tol")) overrides.set("tol", format_double(c.tol));
        if (given("--y0")) overrides.set("y0", c.y0);
        if (given("--ref")) overrides.set("ref", c.ref);
        if (given("--certs")) overrides.set("certs", c.certs);
        if (given("--out")) overrides.set("out", c.out);
        if (given("--bound-scale")) overrides.set("bound_scale", format_double(c.bound_scale));
        c = apply_keys(base, overrides);
    } else {
        c.seed = seed_from_env();
    }
    if (f.seed) c.seed = *f.seed;
    if (f.fixed_l) c.fixed_l = f.fixed_l;
    if (f.l0) c.l0 = f.l0;
    if (f.eta) c.eta = *f.eta;
    if (f.step) c.step = *f.step;
    else if (f.l0 || f.eta) c.step = "backtrack";
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual proximal gradient solvers with convergence certificates"};
    app.require_subcommand(1);

    Flags run_flags, verify_flags, compare_flags;
    auto* run = app.add_subcommand("run", "Solve and write the per-iteration trace CSV");
    add_run_flags(run, run_flags);
    auto* verify = app.add_subcommand("verify", "Solve and evaluate the certificate suite");
    add_run_flags(verify, verify_flags);

    auto* compare = app.add_subcommand("compare", "Run several configurations on one problem");
    add_run_flags(compare, compare_flags);
    std::vector<std::string> variants, config_files;
    compare->add_option("--variant", variants, "Overrides of the base flags, e.g. method=gfdpg,schedule=poly,a=4");
    compare->add_option("configs", config_files, "Configuration files (key = value)");
    std::string svg_path;
    compare->add_option("--svg", svg_path, "Write a log-log SVG of the running-min prox-grad norm");

    auto* rates = app.add_subcommand("rates", "Fit log-log slopes to trace CSV columns");
    std::vector<std::string> traces;
    RatesOptions ropts;
    std::vector<long> window;
    rates->add_option("traces", traces, "Trace CSV files")->required();
    rates->add_option("--metric", ropts.metric, "Column to fit (default pg_norm)");
    rates->add_option("--window", window, "First and last k of the fit window")->expected(2);
    rates->add_flag("--envelope", ropts.envelope, "Fit the running minimum of the metric");
    rates->add_option("--offset", ropts.offset, "Subtract this value from the metric first");
    rates->add_option("--floor", ropts.floor, "Truncate the window where the metric drops to this value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (run->parsed() || verify->parsed()) {
            auto& flags = run->parsed() ? run_flags : verify_flags;
            auto* cmd = run->parsed() ? run : verify;
            RunConfig c = resolve(flags, cmd);
            if (flags.print_config) {
                validate(c);
                std::cout << normalized(c);
                return kOk;
            }
            return run->parsed() ? cmd_run(c, std::cout, std::cerr) : cmd_verify(c, std::cout, std::cerr);
        }
        if (compare->parsed()) {
            RunConfig base = resolve(compare_flags, compare);
            std::vector<RunConfig> configs;
            for (const auto& file : config_files) configs.push_back(apply_keys(RunConfig{}, KeyValues::load(file)));
            for (const auto& v : variants) configs.push_back(apply_keys(base, parse_overrides(v)));
            return cmd_compare(configs, base.out, svg_path, std::cout, std::cerr);
        }
        if (rates->parsed()) {
            if (!window.empty()) {
                ropts.k_lo = window[0];
                ropts.k_hi = window[1];
            }
            return cmd_rates(traces, ropts, std::cout, std::cerr);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}
