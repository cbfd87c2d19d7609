/**
 * @file io.hpp
 * @brief CSV and JSON input/output.
 *
 * Numbers are written with 12 significant digits and LF line endings so
 * that repeated runs produce identical bytes.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admcurve/bounds.hpp"
#include "admcurve/calibration.hpp"
#include "admcurve/term_structures.hpp"

namespace admcurve::io {

/// %.12g
std::string format_number(double v);

/// Numeric CSV with a mandatory header row. Blank lines and lines starting
/// with '#' are skipped; CR before LF is tolerated.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Quote file: header `maturity_years,rate` (OIS, decimal rates) or
/// `maturity_years,spread_bp` (CDS, basis points).
struct RawQuotes {
    QuoteKind kind = QuoteKind::OIS;
    std::vector<double> maturities;
    std::vector<double> rates;  // decimals
};

RawQuotes read_quote_file(const std::filesystem::path& path);

/// Schedule file with header `date,accrual`; every maturity must be a date.
PaymentSchedule read_schedule(const std::filesystem::path& path,
                              const std::vector<double>& maturities);

/// Discount curve file with header `t,discount`, starting at t = 0 with
/// value 1. Log-linear between points, so forwards are piecewise flat.
DiscountCurveFn read_discount_curve(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

/// `maturity,kind,value_or_min,max`; kind is `exact` or `interval`.
std::string bounds_csv(const BoundsResult& bounds);
/// `t_left,v_bottom,t_right,v_top`
std::string rectangles_csv(const BoundsResult& bounds);
std::string bounds_json(const BoundsResult& bounds);

/// `t,lower,upper` for the two extremal step curves of an OIS bound.
std::string extremal_csv(const QuoteSet& quotes, const BoundsResult& bounds,
                         const std::vector<double>& times);

/// `t,discount_or_survival,spot_rate,forward_rate`
std::string curve_csv(const CalibratedCurve& curve, const std::vector<double>& times);
/// `t,value`
std::string sampled_csv(const SampledCurve& curve);

/// Reads the first two columns of a curve file back as a sampled curve.
SampledCurve read_curve_samples(const std::filesystem::path& path);

std::string arbitrage_json(const ArbitrageReport& report);
std::string calibration_json(const CalibrationResult& result, const ModelSpec& spec);
/// {"error": kind, "message": ..., plus the fields the error type carries}
std::string error_json(const std::exception& error);

}  // namespace admcurve::io
