/**
 * @file bounds.hpp
 * @brief Model-free bounds on discount factors and survival probabilities.
 *
 * Only monotonicity and the market-fit equations are imposed; no smoothness.
 * Between two grid-aligned maturities the curve is fully determined, past
 * the first gap only an interval of values is reachable.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admcurve/term_structures.hpp"

namespace admcurve {

struct BoundEntry {
    double maturity = 0.0;
    bool exact = false;
    double lower = 0.0;  // equals upper when exact
    double upper = 0.0;
};

/// Axis-aligned box any admissible curve must cross inside.
struct Rectangle {
    double t_left = 0.0;
    double v_bottom = 0.0;
    double t_right = 0.0;
    double v_top = 0.0;
};

struct BoundsResult {
    QuoteKind kind = QuoteKind::OIS;
    std::vector<BoundEntry> entries;
    std::vector<Rectangle> rectangles;
    /// OIS: H_i, the accrual between consecutive maturities excluding both ends
    /// (zero for grid-aligned maturities).
    std::vector<double> accrual_gaps;
    /// CDS: M_i = P^D(T_{i-1}) - P^D(T_i).
    std::vector<double> discount_drops;
    /// CDS: N_i = sum_{k=p_{i-1}}^{p_i - 1} delta_k P^D(t_k), with p_0 = 1.
    std::vector<double> premium_sums;
    /// Clipping and similar adjustments applied to the raw recursion.
    std::vector<std::string> diagnostics;

    double lower(std::size_t i) const { return entries.at(i - 1).lower; }
    double upper(std::size_t i) const { return entries.at(i - 1).upper; }
};

/// P^D(T_i) for i < i0 from the bidiagonal recursion.
/// Throws DegenerateQuoteError when S_{i-1} = 0 < S_i and ArbitrageError when
/// a value leaves (0, 1].
std::vector<double> ois_exact_prefix(const QuoteSet& quotes);

/// Exact prefix followed by [P_min, P_max] intervals for i >= i0.
BoundsResult ois_model_free_bounds(const QuoteSet& quotes);

struct ArbitrageReport {
    /// Degenerate: a zero quote followed by a positive one, where the
    /// threshold is undefined and the scan stops.
    enum class Status { Clean, Arbitrage, Degenerate };

    Status status = Status::Clean;
    std::optional<std::size_t> index;  // 1-based offending quote
    double quote = 0.0;
    double threshold = 0.0;  // arbitrage iff quote < threshold
    std::string reason;

    bool clean() const { return status == Status::Clean; }
};

/// Scans the quotes and reports the first index violating the monotonicity
/// threshold, or where the lower bound exceeds the upper bound. Never throws
/// for a valid QuoteSet.
ArbitrageReport ois_detect_arbitrage(const QuoteSet& quotes);

enum class Extremum { Lower, Upper };

/// Values on the payment grid of the step curve that attains the lower
/// (resp. upper) bound at every maturity. Index k-1 holds P(t_k).
///
/// Lower: flat at P_min(T_{i-1}) on [T_{i-1}, T_i), dropping at T_i.
/// Upper: drops right after T_{i-1} to P_max(T_i) on (T_{i-1}, T_i].
std::vector<double> ois_extremal_grid_values(const QuoteSet& quotes, const BoundsResult& bounds,
                                             Extremum which);

/// The same extremal curve evaluated at any t in [0, T_n].
double ois_extremal_value(const QuoteSet& quotes, const BoundsResult& bounds, Extremum which,
                          double t);

/// [Q_min, Q_max] at every CDS maturity from the printed recursion.
BoundsResult cds_model_free_bounds(const QuoteSet& quotes, const DiscountCurveFn& discount);

/// Interval a curve value at `t` must lie in according to the rectangles
/// (the tightest box covering t).
std::pair<double, double> rectangle_envelope(const BoundsResult& bounds, double t);

}  // namespace admcurve
