#include "admcurve/cli.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

#include "admcurve/bounds.hpp"
#include "admcurve/errors.hpp"
#include "admcurve/io.hpp"

namespace admcurve::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kOisContainmentSlack = 1e-9;
constexpr double kCdsContainmentSlack = 5e-4;
constexpr double kDefaultFlatRate = 0.03;

QuoteSet load_quotes(const RunConfig& cfg) {
    const auto raw = io::read_quote_file(cfg.input_path);
    auto tenors = to_tenors(raw.maturities);
    if (raw.kind == QuoteKind::OIS) {
        if (cfg.schedule_path) {
            return QuoteSet::ois(std::move(tenors), raw.rates,
                                 io::read_schedule(*cfg.schedule_path, raw.maturities));
        }
        return QuoteSet::ois(std::move(tenors), raw.rates);
    }
    if (cfg.schedule_path) {
        return QuoteSet::cds(std::move(tenors), raw.rates, cfg.recovery,
                             io::read_schedule(*cfg.schedule_path, raw.maturities));
    }
    return QuoteSet::cds(std::move(tenors), raw.rates, cfg.recovery, cfg.frequency);
}

void require_kind(const QuoteSet& quotes, QuoteKind kind, const char* command) {
    if (quotes.kind() != kind) {
        throw InputError(std::string(command) + " needs " + to_string(kind) + " quotes, got " +
                         to_string(quotes.kind()));
    }
}

DiscountCurveFn load_discount(const RunConfig& cfg) {
    if (cfg.discount_curve_path) return io::read_discount_curve(*cfg.discount_curve_path);
    return DiscountCurveFn::flat(cfg.flat_rate.value_or(kDefaultFlatRate));
}

LevyDriver make_driver(const RunConfig& cfg) {
    if (cfg.driver == "brownian") return LevyDriver::brownian();
    if (cfg.driver == "gamma") return LevyDriver::gamma(cfg.lambda);
    if (cfg.driver == "ig") return LevyDriver::inverse_gaussian(cfg.lambda);
    throw InputError("unknown driver '" + cfg.driver + "' (brownian, gamma, ig)");
}

ModelSpec make_spec(const RunConfig& cfg, QuoteKind kind) {
    const auto model = cfg.model.value_or(kind == QuoteKind::OIS ? "levy-ou" : "cir");
    if (model == "levy-ou") return ModelSpec::levy_ou(make_driver(cfg), cfg.c, cfg.x0, cfg.a, cfg.sigma);
    if (model == "cir") return ModelSpec::extended_cir(cfg.x0, cfg.a, cfg.sigma);
    throw InputError("unknown model '" + model + "' (levy-ou, cir)");
}

RunConfig with_parameter(RunConfig cfg, const std::string& name, double value) {
    if (name == "c") {
        cfg.c = value;
    } else if (name == "x0") {
        cfg.x0 = value;
    } else if (name == "a") {
        cfg.a = value;
    } else if (name == "sigma") {
        cfg.sigma = value;
    } else if (name == "lambda") {
        cfg.lambda = value;
    } else {
        throw InputError("unknown sweep parameter '" + name + "' (c, x0, a, sigma, lambda)");
    }
    return cfg;
}

BoundsResult bounds_for(const RunConfig& cfg, const QuoteSet& quotes) {
    return quotes.kind() == QuoteKind::OIS ? ois_model_free_bounds(quotes)
                                           : cds_model_free_bounds(quotes, load_discount(cfg));
}

CalibrationResult calibrate(const RunConfig& cfg, const QuoteSet& quotes, const ModelSpec& spec) {
    if (quotes.kind() == QuoteKind::OIS) {
        return bootstrap_ois(quotes, spec, cfg.bootstrap, cfg.anchors);
    }
    if (!cfg.anchors.empty()) throw InputError("anchors are supported for OIS quotes only");
    return bootstrap_cds(quotes, load_discount(cfg), spec, cfg.bootstrap, cfg.panels_per_period);
}

std::vector<double> curve_times(const RunConfig& cfg, const QuoteSet& quotes,
                                const std::vector<double>& knots) {
    auto extra = quotes.schedule().dates();
    extra.insert(extra.end(), knots.begin(), knots.end());
    return sample_grid(quotes.maturity(quotes.size()), cfg.step, extra);
}

struct Writer {
    fs::path dir;
    RunOutcome* outcome;

    void operator()(const std::string& name, const std::string& text) const {
        const auto path = dir / name;
        io::write_text(path, text);
        outcome->files.push_back(path);
    }
};

std::string label(const std::string& parameter, double value) {
    return parameter + "_" + io::format_number(value);
}

/// Re-reads a curve file and checks every sample against the rectangles.
std::optional<std::string> check_containment(const fs::path& path, const BoundsResult& bounds,
                                             double slack) {
    const auto samples = io::read_curve_samples(path);
    for (std::size_t k = 0; k < samples.times.size(); ++k) {
        const auto [lo, hi] = rectangle_envelope(bounds, samples.times[k]);
        const double v = samples.values[k];
        if (v < lo - slack || v > hi + slack) {
            std::ostringstream os;
            os << path.filename().string() << ": value " << v << " at t = " << samples.times[k]
               << " outside [" << lo << ", " << hi << "]";
            return os.str();
        }
    }
    return std::nullopt;
}

int cmd_bounds(const RunConfig& cfg, QuoteKind kind, const Writer& write, std::ostream& out) {
    const auto quotes = load_quotes(cfg);
    require_kind(quotes, kind, kind == QuoteKind::OIS ? "ois-bounds" : "cds-bounds");
    const auto bounds = bounds_for(cfg, quotes);
    write("bounds.csv", io::bounds_csv(bounds));
    write("rectangles.csv", io::rectangles_csv(bounds));
    write("bounds.json", io::bounds_json(bounds));
    if (kind == QuoteKind::OIS) {
        const auto times = curve_times(cfg, quotes, {});
        write("extremal.csv", io::extremal_csv(quotes, bounds, times));
    }
    for (const auto& e : bounds.entries) {
        out << io::format_number(e.maturity) << "y "
            << (e.exact ? "exact " + io::format_number(e.lower)
                        : "[" + io::format_number(e.lower) + ", " + io::format_number(e.upper) + "]")
            << "\n";
    }
    for (const auto& d : bounds.diagnostics) out << "note: " << d << "\n";
    return 0;
}

int cmd_detect(const RunConfig& cfg, const Writer& write, std::ostream& out) {
    const auto quotes = load_quotes(cfg);
    ArbitrageReport report;
    if (quotes.kind() == QuoteKind::OIS) {
        report = ois_detect_arbitrage(quotes);
    } else {
        try {
            cds_model_free_bounds(quotes, load_discount(cfg));
        } catch (const ArbitrageError& e) {
            report.status = ArbitrageReport::Status::Arbitrage;
            report.index = e.index();
            report.quote = quotes.rate(e.index());
            report.reason = e.what();
        }
    }
    write("arbitrage.json", io::arbitrage_json(report));
    switch (report.status) {
        case ArbitrageReport::Status::Clean:
            out << "clean\n";
            return 0;
        case ArbitrageReport::Status::Arbitrage:
            out << "arbitrage at quote " << *report.index << ": " << report.reason << "\n";
            return 2;
        case ArbitrageReport::Status::Degenerate:
            out << "degenerate quote " << *report.index << ": " << report.reason << "\n";
            return 1;
    }
    return 1;
}

int cmd_calibrate(const RunConfig& cfg, const Writer& write, std::ostream& out) {
    const auto quotes = load_quotes(cfg);
    const auto spec = make_spec(cfg, quotes.kind());
    const auto result = calibrate(cfg, quotes, spec);
    write("curve.csv", io::curve_csv(result.curve, curve_times(cfg, quotes, result.curve.knots())));
    write("calibration.json", io::calibration_json(result, spec));
    out << spec.describe() << "\n";
    for (const auto& r : result.instruments) {
        out << r.tag << " level " << io::format_number(r.implied_level) << " repricing error "
            << io::format_number(r.repricing_error) << "\n";
    }
    out << (result.verdict.admissible ? "admissible" : "not admissible: " + result.verdict.reason)
        << " (" << io::format_number(result.elapsed_seconds) << " s)\n";
    return 0;
}

struct SweepRun {
    double value = 0.0;
    ModelSpec spec;
    CalibrationResult result;
};

std::vector<SweepRun> run_parallel(const RunConfig& cfg, const QuoteSet& quotes) {
    if (cfg.values.empty()) throw InputError("no parameter values given (--values)");
    std::vector<std::future<SweepRun>> jobs;
    for (double v : cfg.values) {
        jobs.push_back(std::async(std::launch::async, [&cfg, &quotes, v] {
            const auto local = with_parameter(cfg, cfg.parameter, v);
            auto spec = make_spec(local, quotes.kind());
            auto result = calibrate(local, quotes, spec);
            return SweepRun{v, std::move(spec), std::move(result)};
        }));
    }
    std::vector<SweepRun> runs;
    std::exception_ptr first_error;
    for (auto& job : jobs) {
        try {
            runs.push_back(job.get());
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return runs;
}

int cmd_sweep(const RunConfig& cfg, const Writer& write, std::ostream& out, std::ostream& err) {
    const auto quotes = load_quotes(cfg);
    const auto bounds = bounds_for(cfg, quotes);
    const auto runs = run_parallel(cfg, quotes);
    const auto times = curve_times(cfg, quotes, runs.front().result.curve.knots());

    std::vector<fs::path> files;
    for (const auto& r : runs) {
        const auto name = "curve_" + label(cfg.parameter, r.value) + ".csv";
        write(name, io::curve_csv(r.result.curve, times));
        files.push_back(write.dir / name);
    }

    std::string overlay = "t,lower,upper";
    for (const auto& r : runs) overlay += "," + label(cfg.parameter, r.value);
    overlay += "\n";
    for (double t : times) {
        const auto [lo, hi] = rectangle_envelope(bounds, t);
        overlay += io::format_number(t) + "," + io::format_number(lo) + "," + io::format_number(hi);
        for (const auto& r : runs) overlay += "," + io::format_number(r.result.curve.value(t));
        overlay += "\n";
    }
    write("bounds_overlay.csv", overlay);

    std::string summary = "parameter,value,admissible,max_repricing_error\n";
    for (const auto& r : runs) {
        summary += cfg.parameter + "," + io::format_number(r.value) + "," +
                   (r.result.verdict.admissible ? "true" : "false") + "," +
                   io::format_number(r.result.max_repricing_error()) + "\n";
    }
    write("sweep.csv", summary);

    const double slack =
        quotes.kind() == QuoteKind::OIS ? kOisContainmentSlack : kCdsContainmentSlack;
    int status = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto problem = check_containment(files[k], bounds, slack);
        out << label(cfg.parameter, runs[k].value) << ": "
            << (runs[k].result.verdict.admissible ? "admissible" : "not admissible")
            << ", max repricing error " << io::format_number(runs[k].result.max_repricing_error())
            << (problem ? ", outside bounds" : ", inside bounds") << "\n";
        if (problem) {
            err << *problem << "\n";
            status = 3;
        }
    }
    return status;
}

int cmd_mix(const RunConfig& cfg, const Writer& write, std::ostream& out) {
    if (cfg.values.size() != 2) throw InputError("mix needs exactly two parameter values");
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
    const auto quotes = load_quotes(cfg);
    const auto runs = run_parallel(cfg, quotes);
    const auto& c1 = runs[0].result.curve;
    const auto& c2 = runs[1].result.curve;
    const auto times = curve_times(cfg, quotes, c1.knots());
    const auto mixed = convex_mix(c1, c2, cfg.alpha, times);
    write("mix.csv", io::sampled_csv(mixed));

    const double alpha = cfg.alpha;
    const auto mix_fn = [&](double t) { return alpha * c1.value(t) + (1.0 - alpha) * c2.value(t); };
    std::vector<double> implied;
    if (quotes.kind() == QuoteKind::OIS) {
        implied = implied_ois_rates(quotes, mix_fn);
    } else {
        const CdsMarketFit fit(quotes, load_discount(cfg), cfg.panels_per_period);
        for (std::size_t i = 1; i <= quotes.size(); ++i) implied.push_back(fit.fair_spread(i, mix_fn));
    }
    std::string report = "maturity,quote,implied_quote,repricing_error\n";
    double worst = 0.0;
    for (std::size_t i = 1; i <= quotes.size(); ++i) {
        const double q = quotes.rate(i);
        const double e = q == 0.0 ? std::abs(implied[i - 1]) : std::abs(implied[i - 1] - q) / q;
        worst = std::max(worst, e);
        report += io::format_number(quotes.maturity(i)) + "," + io::format_number(q) + "," +
                  io::format_number(implied[i - 1]) + "," + io::format_number(e) + "\n";
    }
    write("mix_repricing.csv", report);
    out << "max repricing error " << io::format_number(worst) << ", "
        << (is_nonincreasing(mixed) ? "nonincreasing" : "not monotone") << "\n";
    return 0;
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "ois-bounds") return Command::OisBounds;
    if (name == "cds-bounds") return Command::CdsBounds;
    if (name == "detect-arb") return Command::DetectArb;
    if (name == "calibrate") return Command::Calibrate;
    if (name == "sweep") return Command::Sweep;
    if (name == "mix") return Command::Mix;
    throw InputError("unknown command '" + name + "'");
}

std::pair<double, double> parse_anchor(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InputError("anchor must look like t:value, got " + text);
    try {
        std::size_t used = 0;
        const auto ts = text.substr(0, colon);
        const auto vs = text.substr(colon + 1);
        const double t = std::stod(ts, &used);
        if (used != ts.size()) throw InputError("bad anchor time");
        const double v = std::stod(vs, &used);
        if (used != vs.size()) throw InputError("bad anchor value");
        return {t, v};
    } catch (const std::logic_error&) {
        throw InputError("anchor must look like t:value, got " + text);
    }
}

RunOutcome run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    RunOutcome outcome;
    const Writer write{cfg.output_dir, &outcome};
    const auto fail = [&](int code, const std::exception& e) {
        err << "error: " << e.what() << "\n";
        try {
            write("error.json", io::error_json(e));
        } catch (const std::exception&) {
            // The output directory itself may be the problem.
        }
        outcome.exit_code = code;
        return outcome;
    };
    try {
        if (!(cfg.step > 0.0)) throw InputError("--step must be positive");
        fs::create_directories(cfg.output_dir);
        switch (cfg.command) {
            case Command::OisBounds:
                outcome.exit_code = cmd_bounds(cfg, QuoteKind::OIS, write, out);
                break;
            case Command::CdsBounds:
                outcome.exit_code = cmd_bounds(cfg, QuoteKind::CDS, write, out);
                break;
            case Command::DetectArb:
                outcome.exit_code = cmd_detect(cfg, write, out);
                break;
            case Command::Calibrate:
                outcome.exit_code = cmd_calibrate(cfg, write, out);
                break;
            case Command::Sweep:
                outcome.exit_code = cmd_sweep(cfg, write, out, err);
                break;
            case Command::Mix:
                outcome.exit_code = cmd_mix(cfg, write, out);
                break;
        }
    } catch (const ArbitrageError& e) {
        return fail(2, e);
    } catch (const CalibrationError& e) {
        return fail(3, e);
    } catch (const QuadratureError& e) {
        return fail(3, e);
    } catch (const fs::filesystem_error& e) {
        return fail(1, e);
    } catch (const Error& e) {
        return fail(1, e);
    }
    return outcome;
}

}  // namespace admcurve::cli
