/**
 * @file cli.hpp
 * @brief Command runner behind the `admcurve` executable.
 *
 * Exit codes: 0 success, 1 input error, 2 arbitrage, 3 calibration failure.
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admcurve/calibration.hpp"

namespace admcurve::cli {

enum class Command { OisBounds, CdsBounds, DetectArb, Calibrate, Sweep, Mix };

Command parse_command(const std::string& name);

struct RunConfig {
    Command command = Command::OisBounds;
    std::filesystem::path input_path;
    std::filesystem::path output_dir = ".";

    // Model; the default family is levy-ou for OIS and cir for CDS quotes.
    std::optional<std::string> model;
    std::string driver = "gamma";
    double x0 = 0.00063;
    double a = 0.01;
    double sigma = 1.0;
    double c = 1.0;
    double lambda = 200.0;

    // Credit inputs.
    double recovery = 0.4;
    std::optional<double> flat_rate;
    std::optional<std::filesystem::path> discount_curve_path;
    int frequency = 4;
    std::optional<std::filesystem::path> schedule_path;

    double step = 0.05;
    std::vector<std::pair<double, double>> anchors;

    // sweep / mix: parameter name (c, x0, a, sigma, lambda) and its values.
    std::string parameter = "c";
    std::vector<double> values;
    double alpha = 0.5;

    std::size_t panels_per_period = 1;
    BootstrapConfig bootstrap;
};

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::filesystem::path> files;
};

/// Runs one command, writing files into cfg.output_dir and a short summary
/// to `out`. Errors are mapped to exit codes; diagnostics go to `err` and,
/// for calibration failures, to `error.json` in the output directory.
RunOutcome run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// "t:v" -> (t, v)
std::pair<double, double> parse_anchor(const std::string& text);

}  // namespace admcurve::cli
