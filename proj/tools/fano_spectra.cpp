// fano_spectra: spectra, periods and Gamma-class limits of toric Fano manifolds.

#include <CLI11.hpp>

#include <iostream>

#include "fano/report.hpp"

namespace {

void add_model_options(CLI::App* sub, fano::RunConfig& cfg) {
    sub->add_option("--family", cfg.family, "built-in family")->check(CLI::IsMember({"xn", "xnp"}));
    sub->add_option("--n", cfg.n, "family parameter");
    sub->add_option("--fan", cfg.fan_path, "fan JSON file (overrides --family)");
}

void add_q_options(CLI::App* sub, fano::RunConfig& cfg) {
    sub->add_option("--q1", cfg.q1, "first quantum parameter");
    sub->add_option("--q2", cfg.q2, "second quantum parameter");
}

void add_output_options(CLI::App* sub, fano::RunConfig& cfg, bool csv) {
    sub->add_option("--out", cfg.out_path, "JSON report path (default stdout)");
    if (csv) sub->add_option("--csv", cfg.csv_path, "CSV output path");
}

}  // namespace

int main(int argc, char** argv) {
    fano::RunConfig cfg;
    CLI::App app{"Quantum cohomology spectra and Gamma-class limits of toric Fano manifolds"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--tol", cfg.tol, "relative equality tolerance")->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "spectrum, flags, T_con and T_Acon for one model");
    add_model_options(analyze, cfg);
    add_q_options(analyze, cfg);
    analyze->add_option("--terms", cfg.terms, "period coefficients for the T_Acon fit (0 skips)");
    add_output_options(analyze, cfg, false);

    auto* scan = app.add_subcommand("scan", "track critical values of X_n along q2 at fixed q1");
    add_model_options(scan, cfg);
    scan->add_option("--q1", cfg.q1, "fixed q1");
    scan->add_option("--q2-lo", cfg.q2_lo, "lower end of the q2 grid");
    scan->add_option("--q2-hi", cfg.q2_hi, "upper end of the q2 grid");
    scan->add_option("--grid", cfg.grid, "number of grid points");
    add_output_options(scan, cfg, true);

    auto* tropical = app.add_subcommand("tropical", "tropical exponents of X_n along q = (1, T^lambda)");
    add_model_options(tropical, cfg);
    tropical->add_option("--lambda", cfg.lambda, "direction exponent");
    tropical->add_option("--T-lo", cfg.T_lo, "smallest T");
    tropical->add_option("--T-hi", cfg.T_hi, "largest T");
    tropical->add_option("--grid", cfg.grid, "number of T values");
    add_output_options(tropical, cfg, false);

    auto* period = app.add_subcommand("period", "regularized quantum period and its growth");
    add_model_options(period, cfg);
    period->add_option("--terms", cfg.terms, "number of coefficients");
    add_output_options(period, cfg, true);

    auto* gamma = app.add_subcommand("gamma-limit", "limit direction of J(tau + c1 log t, 1) for X_n");
    add_model_options(gamma, cfg);
    add_q_options(gamma, cfg);
    gamma->add_option("--digits", cfg.digits, "working decimal digits");
    gamma->add_option("--t", cfg.t_schedule, "t schedule (default 10 15 20 25 30 35 40)");
    add_output_options(gamma, cfg, false);

    auto* validate = app.add_subcommand("validate-fan", "check a fan file for completeness and smoothness");
    validate->add_option("--fan", cfg.fan_path, "fan JSON file")->required();
    add_output_options(validate, cfg, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    const auto result = fano::run_command(cfg);
    int code = result.exit_code;
    try {
        const std::string json = result.report.dump(2) + "\n";
        if (cfg.out_path.empty())
            std::cout << json;
        else
            fano::write_file_atomic(cfg.out_path, json);
        if (!cfg.csv_path.empty() && !result.csv.empty()) fano::write_file_atomic(cfg.csv_path, result.csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!result.message.empty()) std::cerr << (code == 1 ? "error: " : "warning: ") << result.message << "\n";
    return code;
}
