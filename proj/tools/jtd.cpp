// jtd: command-line front end for the regime-switching jump-telegraph-diffusion library.
#include <iostream>

#include <CLI11.hpp>

#include "jtd/cli.hpp"

int main(int argc, char** argv)
{
    using namespace jtd::cli;

    CLI::App app{"Regime-switching jump-telegraph-diffusion models: densities, measures, pricing, simulation"};
    app.require_subcommand(1);

    ValidateOptions vo;
    auto* validate = app.add_subcommand("validate", "Load a config and report parameter violations");
    validate->add_option("config", vo.config, "Model config (JSON)")->required();
    validate->add_flag("--telegraph", vo.telegraph, "Also require c0 > c1");

    DensityOptions dno;
    auto* density = app.add_subcommand("density", "Tabulate a density as CSV");
    density->add_option("config", dno.config, "Model config (JSON)")->required();
    density->add_option("--kind", dno.kind, "switch-count | spending-time | telegraph | jtd")
        ->required()
        ->check(CLI::IsMember({"switch-count", "spending-time", "telegraph", "jtd"}));
    density->add_option("--t", dno.t, "Horizon");
    density->add_option("--start", dno.start, "Initial state (0 or 1)");
    density->add_option("--n", dno.n, "Restrict to exactly n switches");
    density->add_option("--points", dno.points, "Grid points");
    density->add_option("--xmin", dno.xmin, "Grid lower end");
    density->add_option("--xmax", dno.xmax, "Grid upper end");
    density->add_flag("--bessel", dno.bessel, "Telegraph: closed form for h0 + h1 = 0");
    density->add_flag("--gnuplot", dno.gnuplot, "Two whitespace-separated columns, no header");
    density->add_option("--atoms", dno.atoms_path, "Write point masses to this JSON file");

    MeasureOptions mo;
    auto* measure = app.add_subcommand("measure", "Construct a martingale measure");
    measure->add_option("config", mo.config, "Model config (JSON)")->required();
    measure->add_option("--mode", mo.mode, "complete | family")->check(CLI::IsMember({"complete", "family"}));
    measure->add_option("--theta0", mo.theta0, "Family parameter in state 0");
    measure->add_option("--theta1", mo.theta1, "Family parameter in state 1");

    PriceOptions po;
    bool want_mc = false, want_both = false, want_analytic = false;
    auto* price = app.add_subcommand("price", "Price a European call on asset 1");
    price->add_option("config", po.config, "Model config (JSON)")->required();
    price->add_option("--strike,-K", po.strike, "Strike")->required();
    price->add_option("--maturity,-T", po.maturity, "Maturity")->required();
    price->add_option("--start", po.start, "Initial state (0 or 1)");
    auto* f_an = price->add_flag("--analytic", want_analytic, "Analytic price only (default)");
    auto* f_mc = price->add_flag("--mc", want_mc, "Monte Carlo only");
    auto* f_both = price->add_flag("--both", want_both, "Analytic and Monte Carlo");
    f_an->excludes(f_mc)->excludes(f_both);
    f_mc->excludes(f_both);
    price->add_option("--paths", po.n_paths, "Monte Carlo paths");
    price->add_option("--seed", po.seed, "Monte Carlo seed");

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "Simulate paths and summarize");
    simulate->add_option("config", so.config, "Model config (JSON)")->required();
    simulate->add_option("--horizon,-T", so.horizon, "Horizon");
    simulate->add_option("--start", so.start, "Initial state (0 or 1)");
    simulate->add_option("--paths", so.n_paths, "Number of paths");
    simulate->add_option("--seed", so.seed, "Seed");
    simulate->add_flag("--under-measure", so.under_measure, "Simulate under the martingale measure");
    simulate->add_option("--dump", so.dump_path, "Write every path to this CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kValidation;
    }

    if (*validate) return cmd_validate(vo, std::cout, std::cerr);
    if (*density) return cmd_density(dno, std::cout, std::cerr);
    if (*measure) return cmd_measure(mo, std::cout, std::cerr);
    if (*price) {
        po.analytic = !want_mc;
        po.monte_carlo = want_mc || want_both;
        return cmd_price(po, std::cout, std::cerr);
    }
    if (*simulate) return cmd_simulate(so, std::cout, std::cerr);
    return kFailure;
}
