#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "admcurve/cli.hpp"
#include "admcurve/errors.hpp"

namespace {

using admcurve::cli::RunConfig;

void add_common(CLI::App& sub, RunConfig& cfg, std::string& discount_curve,
                std::string& schedule) {
    sub.add_option("input", cfg.input_path, "Quote CSV")->required()->check(CLI::ExistingFile);
    sub.add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
    sub.add_option("--schedule", schedule, "Payment schedule CSV (date,accrual)")
        ->check(CLI::ExistingFile);
    sub.add_option("--recovery", cfg.recovery, "CDS recovery rate")->capture_default_str();
    sub.add_option("--flat-rate", cfg.flat_rate, "Flat discount rate for CDS (default 0.03)");
    sub.add_option("--discount-curve", discount_curve, "Discount curve CSV (t,discount)")
        ->check(CLI::ExistingFile);
    sub.add_option("--frequency", cfg.frequency, "CDS premium payments per year")
        ->capture_default_str();
    sub.add_option("--step", cfg.step, "Sampling step of curve files in years")
        ->capture_default_str();
}

void add_model(CLI::App& sub, RunConfig& cfg, std::vector<std::string>& anchors) {
    sub.add_option("--model", cfg.model, "levy-ou or cir (default: levy-ou for OIS, cir for CDS)")
        ->check(CLI::IsMember({"levy-ou", "cir"}));
    sub.add_option("--driver", cfg.driver, "Levy driver")
        ->check(CLI::IsMember({"brownian", "gamma", "ig"}))
        ->capture_default_str();
    sub.add_option("--x0", cfg.x0, "Initial short rate or intensity")->capture_default_str();
    sub.add_option("--a", cfg.a, "Mean-reversion speed")->capture_default_str();
    sub.add_option("--sigma", cfg.sigma, "Volatility")->capture_default_str();
    sub.add_option("--c", cfg.c, "Time change of the Levy driver")->capture_default_str();
    sub.add_option("--lambda", cfg.lambda, "Jump-scale parameter of the driver")
        ->capture_default_str();
    sub.add_option("--anchor", anchors, "Extra constraint P(t) = v, given as t:v");
    sub.add_option("--panels", cfg.panels_per_period,
                   "Gauss-Legendre panels per premium period")
        ->capture_default_str();
    sub.add_option("--max-iterations", cfg.bootstrap.max_iterations, "Root-finder iterations")
        ->capture_default_str();
    sub.add_option("--residual-tol", cfg.bootstrap.residual_tolerance, "Residual tolerance")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arbitrage-free bounds and admissible curves from OIS and CDS quotes"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string discount_curve;
    std::string schedule;
    std::vector<std::string> anchors;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"ois-bounds", "Exact discount factors and model-free bounds from OIS rates"},
        {"cds-bounds", "Model-free survival probability bounds from CDS spreads"},
        {"detect-arb", "Check a quote set for arbitrage"},
        {"calibrate", "Bootstrap an admissible model curve"},
        {"sweep", "Calibrate across a list of parameter values"},
        {"mix", "Convex mix of two calibrated curves"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(*sub, cfg, discount_curve, schedule);
        if (name == "calibrate" || name == "sweep" || name == "mix") add_model(*sub, cfg, anchors);
        if (name == "sweep" || name == "mix") {
            sub->add_option("--param", cfg.parameter, "Swept parameter: c, x0, a, sigma, lambda")
                ->capture_default_str();
            sub->add_option("--values", cfg.values, "Parameter values")
                ->delimiter(',')
                ->required();
        }
        if (name == "mix") sub->add_option("--alpha", cfg.alpha, "Weight of the first curve");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cfg.command = admcurve::cli::parse_command(app.get_subcommands().front()->get_name());
        if (!discount_curve.empty()) cfg.discount_curve_path = discount_curve;
        if (!schedule.empty()) cfg.schedule_path = schedule;
        for (const auto& a : anchors) cfg.anchors.push_back(admcurve::cli::parse_anchor(a));
    } catch (const admcurve::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return admcurve::cli::run(cfg, std::cout, std::cerr).exit_code;
}
