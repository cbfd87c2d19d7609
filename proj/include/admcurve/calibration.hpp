/**
 * @file calibration.hpp
 * @brief Market-fit systems and the level bootstrap.
 *
 * Every building instrument's present value is linear in curve values on
 * the payment grid. Because instrument i only touches dates up to T_i and a
 * model curve on [0, T_i] only depends on b_1..b_i, the fit reduces to one
 * monotone scalar equation per maturity.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "admcurve/affine_models.hpp"
#include "admcurve/term_structures.hpp"

namespace admcurve {

/// Dense A P = B with A of size n x m (row-major), m the payment grid size.
struct MarketFitSystem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> A;
    std::vector<double> B;
    std::vector<double> grid;  // t_1..t_m
    std::vector<std::string> tags;

    double at(std::size_t i, std::size_t k) const { return A[i * cols + k]; }
    /// Last column with a non-zero coefficient in row i (0-based), or npos.
    std::size_t last_nonzero(std::size_t i) const;
    /// A P - B for grid values P (size cols).
    std::vector<double> residuals(const std::vector<double>& grid_values) const;
};

/// Row i: S_i delta_k for k < p_i, S_i delta_{p_i} + 1 at p_i, B_i = 1.
MarketFitSystem assemble_ois_system(const QuoteSet& quotes);

/// Premium coefficients S_i delta_k P^D(t_k) plus (1 - R) P^D(T_i) at p_i,
/// B_i = 1 - R. The protection integral is not part of this linear form; it
/// is evaluated against smooth curves by CdsMarketFit::residual.
MarketFitSystem assemble_cds_system(const QuoteSet& quotes, const DiscountCurveFn& discount);

/// CDS market fit with the protection leg integrated by parts:
/// S sum delta_k P^D Q(t_k) + (1-R) P^D(T) Q(T) + (1-R) int_0^T f^D P^D Q dt = 1 - R.
class CdsMarketFit {
public:
    CdsMarketFit(QuoteSet quotes, DiscountCurveFn discount, std::size_t panels_per_period = 1);

    const MarketFitSystem& system() const noexcept { return system_; }
    const QuoteSet& quotes() const noexcept { return quotes_; }

    /// Residual of instrument i (1-based) for survival curve `survival`,
    /// which is only evaluated on [0, T_i].
    double residual(std::size_t i, const std::function<double(double)>& survival) const;
    /// Spread that zeroes the residual of instrument i.
    double fair_spread(std::size_t i, const std::function<double(double)>& survival) const;
    /// int_0^{T_i} f^D P^D Q dt with 8 * panels_per_period nodes per period.
    double protection_integral(std::size_t i,
                               const std::function<double(double)>& survival) const;
    double risky_annuity(std::size_t i, const std::function<double(double)>& survival) const;

private:
    QuoteSet quotes_;
    DiscountCurveFn discount_;
    std::size_t panels_;
    MarketFitSystem system_;
};

/// One scalar equation of the bootstrap. `residual` must only look at the
/// curve on [0, maturity] and be monotone in the last level.
struct Instrument {
    double maturity = 0.0;
    double quote = 0.0;
    std::string tag;
    std::function<double(const CalibratedCurve&)> residual;
    std::function<double(const CalibratedCurve&)> implied_quote;
};

std::vector<Instrument> ois_instruments(const QuoteSet& quotes);
std::vector<Instrument> cds_instruments(const CdsMarketFit& fit);
/// Forces P(t) = value; inserted as an extra knot at t.
Instrument anchor_instrument(double t, double value);

/// Merges anchors into the instrument list by maturity. Throws InputError on
/// duplicate maturities.
std::vector<Instrument> merge_instruments(std::vector<Instrument> base,
                                          std::vector<Instrument> extra);

struct BootstrapConfig {
    double residual_tolerance = 1e-12;
    double bracket_lo = -1.0;  // initial bracket offsets around the guess
    double bracket_hi = 5.0;
    double max_bracket_lo = -50.0;  // widest bracket allowed
    double max_bracket_hi = 50.0;
    int max_iterations = 200;
    bool enforce_no_arbitrage = true;
};

struct InstrumentReport {
    double maturity = 0.0;
    double quote = 0.0;
    double implied_level = 0.0;
    double implied_quote = 0.0;
    double repricing_error = 0.0;  // |implied - quote| / quote (absolute if quote = 0)
    double residual = 0.0;
    int iterations = 0;
    std::string tag;
};

struct CalibrationResult {
    CalibratedCurve curve;
    std::vector<InstrumentReport> instruments;
    Verdict verdict;
    double elapsed_seconds = 0.0;

    double max_repricing_error() const;
};

/// Sequential root-finding of b_1..b_n. Throws NoSolutionError when the
/// residual keeps its sign over the widest bracket and InadmissibleError when
/// enforce_no_arbitrage is set and an interval fails its verdict.
CalibrationResult bootstrap(const std::vector<Instrument>& instruments, const ModelSpec& spec,
                            const BootstrapConfig& config = {});

CalibrationResult bootstrap_ois(const QuoteSet& quotes, const ModelSpec& spec,
                                const BootstrapConfig& config = {},
                                const std::vector<std::pair<double, double>>& anchors = {});

CalibrationResult bootstrap_cds(const QuoteSet& quotes, const DiscountCurveFn& discount,
                                const ModelSpec& spec, const BootstrapConfig& config = {},
                                std::size_t panels_per_period = 1);

/// Curve values on a fixed grid.
struct SampledCurve {
    std::vector<double> times;
    std::vector<double> values;

    /// Linear interpolation; exact at grid points. Throws DomainError outside.
    double value_at(double t) const;
};

/// Grid 0, step, 2 step, ... up to horizon, merged with `extra` times.
std::vector<double> sample_grid(double horizon, double step, const std::vector<double>& extra = {});

SampledCurve sample_curve(const CalibratedCurve& curve, const std::vector<double>& times);

/// alpha * first + (1 - alpha) * second, pointwise. Grids must match.
SampledCurve convex_mix(const SampledCurve& first, const SampledCurve& second, double alpha);

/// Mixes two calibrated curves on `times`. The curves must share knots.
SampledCurve convex_mix(const CalibratedCurve& first, const CalibratedCurve& second, double alpha,
                        const std::vector<double>& times);

/// Par rates implied by any curve t -> P(t) on the quote set's schedule.
std::vector<double> implied_ois_rates(const QuoteSet& quotes,
                                      const std::function<double(double)>& curve);

bool is_nonincreasing(const SampledCurve& curve, double slack = 0.0);

}  // namespace admcurve
