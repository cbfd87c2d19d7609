#include "admcurve/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "admcurve/errors.hpp"
#include "json.hpp"

namespace admcurve::io {

namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || !std::isfinite(v)) {
        std::ostringstream os;
        os << path.string() << ":" << line << ": not a number: '" << text << "'";
        throw InputError(os.str());
    }
    return v;
}

/// Rounds to what format_number prints, so JSON and CSV agree.
double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(rounded(*v)) : ordered_json(nullptr);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("missing CSV column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cells = split(t);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            std::ostringstream os;
            os << path.string() << ":" << number << ": expected " << table.header.size()
               << " fields, got " << cells.size();
            throw InputError(os.str());
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_number(c, path, number));
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw InputError(path.string() + ": missing header line");
    if (table.rows.empty()) throw InputError(path.string() + ": no data rows");
    return table;
}

RawQuotes read_quote_file(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    RawQuotes q;
    const auto& h = table.header;
    if (h.size() == 2 && h[0] == "maturity_years" && h[1] == "rate") {
        q.kind = QuoteKind::OIS;
    } else if (h.size() == 2 && h[0] == "maturity_years" && h[1] == "spread_bp") {
        q.kind = QuoteKind::CDS;
    } else {
        throw InputError(path.string() +
                         ": header must be 'maturity_years,rate' or 'maturity_years,spread_bp'");
    }
    const double scale = q.kind == QuoteKind::CDS ? 1e-4 : 1.0;
    for (const auto& row : table.rows) {
        q.maturities.push_back(row[0]);
        q.rates.push_back(row[1] * scale);
    }
    return q;
}

PaymentSchedule read_schedule(const std::filesystem::path& path,
                              const std::vector<double>& maturities) {
    const auto table = read_csv(path);
    const auto dc = table.column("date");
    const auto ac = table.column("accrual");
    std::vector<double> dates;
    std::vector<double> accruals;
    for (const auto& row : table.rows) {
        dates.push_back(row[dc]);
        accruals.push_back(row[ac]);
    }
    const auto tenors = to_tenors(maturities);
    const auto located = PaymentSchedule::from_dates(dates, tenors);
    return PaymentSchedule(located.dates(), std::move(accruals), located.standard_positions());
}

DiscountCurveFn read_discount_curve(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    const auto tc = table.column("t");
    const auto dc = table.column("discount");
    auto times = std::make_shared<std::vector<double>>();
    auto logs = std::make_shared<std::vector<double>>();
    for (const auto& row : table.rows) {
        if (!(row[dc] > 0.0)) throw InputError(path.string() + ": discount factors must be positive");
        if (!times->empty() && !(row[tc] > times->back())) {
            throw InputError(path.string() + ": times must be strictly increasing");
        }
        times->push_back(row[tc]);
        logs->push_back(std::log(row[dc]));
    }
    if (times->front() != 0.0 || logs->front() != 0.0 || times->size() < 2) {
        throw InputError(path.string() + ": curve must start at t = 0 with discount 1");
    }
    const auto segment = [times](double t) {
        if (t < 0.0 || t > times->back()) {
            throw DomainError("discount curve file does not cover t = " + format_number(t));
        }
        const auto it = std::upper_bound(times->begin(), times->end(), t);
        const auto j = static_cast<std::size_t>(it - times->begin());
        return std::min(j, times->size() - 1) - 1;
    };
    auto discount = [times, logs, segment](double t) {
        const auto j = segment(t);
        const double w = (t - (*times)[j]) / ((*times)[j + 1] - (*times)[j]);
        return std::exp((1.0 - w) * (*logs)[j] + w * (*logs)[j + 1]);
    };
    auto forward = [times, logs, segment](double t) {
        const auto j = segment(t);
        return -((*logs)[j + 1] - (*logs)[j]) / ((*times)[j + 1] - (*times)[j]);
    };
    return DiscountCurveFn(discount, forward, "file(" + path.filename().string() + ")");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

std::string bounds_csv(const BoundsResult& bounds) {
    std::string s = "maturity,kind,value_or_min,max\n";
    for (const auto& e : bounds.entries) {
        s += format_number(e.maturity);
        if (e.exact) {
            s += ",exact," + format_number(e.lower) + ",\n";
        } else {
            s += ",interval," + format_number(e.lower) + "," + format_number(e.upper) + "\n";
        }
    }
    return s;
}

std::string rectangles_csv(const BoundsResult& bounds) {
    std::string s = "t_left,v_bottom,t_right,v_top\n";
    for (const auto& r : bounds.rectangles) {
        s += format_number(r.t_left) + "," + format_number(r.v_bottom) + "," +
             format_number(r.t_right) + "," + format_number(r.v_top) + "\n";
    }
    return s;
}

std::string bounds_json(const BoundsResult& bounds) {
    ordered_json j;
    j["kind"] = to_string(bounds.kind);
    auto& entries = j["bounds"] = ordered_json::array();
    for (const auto& e : bounds.entries) {
        ordered_json row;
        row["maturity"] = rounded(e.maturity);
        row["kind"] = e.exact ? "exact" : "interval";
        row["value_or_min"] = rounded(e.lower);
        row["max"] = e.exact ? ordered_json(nullptr) : ordered_json(rounded(e.upper));
        entries.push_back(row);
    }
    auto& rects = j["rectangles"] = ordered_json::array();
    for (const auto& r : bounds.rectangles) {
        rects.push_back({{"t_left", rounded(r.t_left)},
                         {"v_bottom", rounded(r.v_bottom)},
                         {"t_right", rounded(r.t_right)},
                         {"v_top", rounded(r.v_top)}});
    }
    j["diagnostics"] = bounds.diagnostics;
    return dump(j);
}

std::string extremal_csv(const QuoteSet& quotes, const BoundsResult& bounds,
                         const std::vector<double>& times) {
    std::string s = "t,lower,upper\n";
    for (double t : times) {
        s += format_number(t) + "," +
             format_number(ois_extremal_value(quotes, bounds, Extremum::Lower, t)) + "," +
             format_number(ois_extremal_value(quotes, bounds, Extremum::Upper, t)) + "\n";
    }
    return s;
}

std::string curve_csv(const CalibratedCurve& curve, const std::vector<double>& times) {
    std::string s = "t,discount_or_survival,spot_rate,forward_rate\n";
    for (double t : times) {
        s += format_number(t) + "," + format_number(curve.value(t)) + "," +
             format_number(curve.spot_rate(t)) + "," + format_number(curve.forward(t)) + "\n";
    }
    return s;
}

std::string sampled_csv(const SampledCurve& curve) {
    std::string s = "t,value\n";
    for (std::size_t k = 0; k < curve.times.size(); ++k) {
        s += format_number(curve.times[k]) + "," + format_number(curve.values[k]) + "\n";
    }
    return s;
}

SampledCurve read_curve_samples(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    if (table.header.size() < 2 || table.header[0] != "t") {
        throw InputError(path.string() + ": expected a curve file starting with column 't'");
    }
    SampledCurve out;
    for (const auto& row : table.rows) {
        out.times.push_back(row[0]);
        out.values.push_back(row[1]);
    }
    return out;
}

std::string arbitrage_json(const ArbitrageReport& report) {
    ordered_json j;
    switch (report.status) {
        case ArbitrageReport::Status::Clean:
            j["status"] = "clean";
            break;
        case ArbitrageReport::Status::Arbitrage:
            j["status"] = "arbitrage";
            break;
        case ArbitrageReport::Status::Degenerate:
            j["status"] = "degenerate";
            break;
    }
    if (report.index) {
        j["index"] = *report.index;
        j["quote"] = rounded(report.quote);
        j["threshold"] = rounded(report.threshold);
        j["reason"] = report.reason;
    }
    return dump(j);
}

std::string calibration_json(const CalibrationResult& result, const ModelSpec& spec) {
    ordered_json j;
    j["model"] = spec.describe();
    auto& rows = j["instruments"] = ordered_json::array();
    for (const auto& r : result.instruments) {
        rows.push_back({{"tag", r.tag},
                        {"maturity", rounded(r.maturity)},
                        {"quote", rounded(r.quote)},
                        {"implied_level", rounded(r.implied_level)},
                        {"implied_quote", rounded(r.implied_quote)},
                        {"repricing_error", rounded(r.repricing_error)},
                        {"iterations", r.iterations}});
    }
    ordered_json verdict;
    verdict["admissible"] = result.verdict.admissible;
    verdict["interval"] = result.verdict.interval ? ordered_json(*result.verdict.interval)
                                                  : ordered_json(nullptr);
    verdict["t_star"] = optional_number(result.verdict.t_star);
    verdict["reason"] = result.verdict.reason;
    j["verdict"] = verdict;
    j["max_repricing_error"] = rounded(result.max_repricing_error());
    // Timing goes to stdout so report files stay byte-identical across runs.
    return dump(j);
}

std::string error_json(const std::exception& error) {
    ordered_json j;
    j["message"] = error.what();
    if (const auto* e = dynamic_cast<const NoSolutionError*>(&error)) {
        j["error"] = "no_solution";
        j["instrument"] = e->instrument();
        j["bracket"] = {rounded(e->bracket_lo()), rounded(e->bracket_hi())};
        j["residuals"] = {rounded(e->residual_lo()), rounded(e->residual_hi())};
    } else if (const auto* e = dynamic_cast<const InadmissibleError*>(&error)) {
        j["error"] = "inadmissible";
        j["instrument"] = e->instrument();
        j["t_star"] = optional_number(e->t_star());
    } else if (const auto* e = dynamic_cast<const CalibrationError*>(&error)) {
        j["error"] = "calibration";
        j["instrument"] = e->instrument();
    } else if (const auto* e = dynamic_cast<const ArbitrageError*>(&error)) {
        j["error"] = "arbitrage";
        j["index"] = e->index();
    } else if (const auto* e = dynamic_cast<const DegenerateQuoteError*>(&error)) {
        j["error"] = "degenerate_quote";
        j["index"] = e->index();
    } else if (const auto* e = dynamic_cast<const PreconditionError*>(&error)) {
        j["error"] = "precondition";
        j["index"] = e->index();
    } else if (const auto* e = dynamic_cast<const QuadratureError*>(&error)) {
        j["error"] = "quadrature";
        j["achieved_tolerance"] = e->achieved_tolerance();
    } else if (dynamic_cast<const InputError*>(&error) != nullptr) {
        j["error"] = "input";
    } else if (dynamic_cast<const DomainError*>(&error) != nullptr) {
        j["error"] = "domain";
    } else {
        j["error"] = "internal";
    }
    return dump(j);
}

}  // namespace admcurve::io
