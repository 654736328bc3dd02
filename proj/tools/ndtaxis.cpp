// Command-line runner: run, continuation, refine, sweep, ineq.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ndtaxis/config.hpp"
#include "ndtaxis/experiments.hpp"
#include "ndtaxis/format.hpp"

using namespace ndtaxis;

namespace {

struct Common {
    std::string config_path;
    std::string out;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("config", c.config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory (overrides output.dir)");
    cmd->add_option("--jobs", c.jobs, "Concurrent child runs")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "Seed (overrides the config seed)");
}

RunConfig load(const Common& c) {
    RunConfig config = load_config(c.config_path);
    if (!c.out.empty()) config.out_dir = c.out;
    if (c.seed) config.seed = *c.seed;
    validate(config);
    return config;
}

int report(const RunManifest& m, const RunConfig& config) {
    std::cout << m.status << " " << (config.out_dir / "manifest.json").string() << " (" << format_number(m.wall_seconds)
              << " s)\n";
    if (!m.ok()) std::cerr << m.message << "\n";
    return m.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degenerate nutrient-taxis simulator and experiment runner"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    Common run_opts, cont_opts, refine_opts, sweep_opts, ineq_opts;
    std::vector<double> eps_list, l_list;
    std::vector<int> n_list;
    bool no_mms = false;

    auto* run = app.add_subcommand("run", "Run one scenario");
    add_common(run, run_opts);
    auto* cont = app.add_subcommand("continuation", "Epsilon continuation");
    add_common(cont, cont_opts);
    cont->add_option("--eps", eps_list, "Strictly decreasing epsilon values")->required();
    auto* refine = app.add_subcommand("refine", "Grid refinement study");
    add_common(refine, refine_opts);
    refine->add_option("--n", n_list, "Doubling list of cells per axis")->required();
    refine->add_flag("--no-mms", no_mms, "Self-convergence against the finest grid instead of the manufactured solution");
    auto* sweep = app.add_subcommand("sweep", "Sweep over the exponent l");
    add_common(sweep, sweep_opts);
    sweep->add_option("--l", l_list, "Values of l")->required();
    auto* ineq = app.add_subcommand("ineq", "Functional inequality study");
    add_common(ineq, ineq_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const RunConfig c = load(run_opts);
            return report(run_scenario(c), c);
        }
        if (cont->parsed()) {
            const RunConfig c = load(cont_opts);
            std::vector<ContinuationRow> rows;
            const RunManifest m = epsilon_continuation(c, eps_list, cont_opts.jobs, &rows);
            for (const auto& r : rows) {
                std::cout << "eps " << format_number(r.eps_a) << " -> " << format_number(r.eps_b)
                          << "  L1(u) = " << format_number(r.l1_u) << "\n";
            }
            return report(m, c);
        }
        if (refine->parsed()) {
            const RunConfig c = load(refine_opts);
            RefinementResult res;
            const RunManifest m = refinement_study(c, n_list, !no_mms, refine_opts.jobs, &res);
            for (const auto& r : res.spatial) {
                std::cout << "n " << r.n << "  err_u " << format_number(r.err_u) << "  order_u "
                          << format_number(r.order_u) << "\n";
            }
            for (const auto& r : res.temporal) {
                std::cout << "dt " << format_number(r.dt) << "  diff_u " << format_number(r.diff_u) << "  order_u "
                          << format_number(r.order_u) << "\n";
            }
            return report(m, c);
        }
        if (sweep->parsed()) {
            const RunConfig c = load(sweep_opts);
            return report(l_sweep(c, l_list, sweep_opts.jobs), c);
        }
        if (ineq->parsed()) {
            const RunConfig c = load(ineq_opts);
            std::vector<IneqSummaryRow> rows;
            const RunManifest m = inequality_study(c, ineq_opts.jobs, &rows);
            for (const auto& r : rows) {
                std::cout << r.inequality << " n=" << r.n << " p=" << format_number(r.p) << " eta="
                          << format_number(r.eta) << "  c=" << format_number(r.fitted_c) << "\n";
            }
            return report(m, c);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
