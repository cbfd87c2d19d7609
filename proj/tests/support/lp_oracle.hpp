// Test-only linear-programming oracle for the model-free bounds.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "admcurve/term_structures.hpp"

namespace lp {

/// minimize c.x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0
struct Problem {
    std::size_t n = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> a_eq;
    std::vector<double> b_eq;
    std::vector<std::vector<double>> a_ub;
    std::vector<double> b_ub;
};

struct Solution {
    bool feasible = false;
    bool bounded = true;
    double objective = 0.0;
    std::vector<double> x;
};

/// Dense two-phase simplex with Bland's rule.
Solution solve(const Problem& p);

struct Range {
    double min = 0.0;
    double max = 0.0;
};

/// Min and max of P(T_i) over nonincreasing grid values 1 >= P(t_1) >= ... >= 0
/// that satisfy every OIS market-fit equation.
std::optional<Range> ois_bound(const admcurve::QuoteSet& quotes, std::size_t i);

enum class CdsMode {
    /// Q(t) = Q(t_k) on (t_{k-1}, t_k]: piecewise constant on the premium grid.
    PiecewiseConstant,
    /// Any nonincreasing Q between grid dates: the protection integral over a
    /// period ranges between its two step-function extremes.
    Relaxed,
};

/// Min and max of Q(T_i) subject to the CDS market-fit equations of rows
/// 1..rows (all rows when rows = 0).
std::optional<Range> cds_bound(const admcurve::QuoteSet& quotes,
                               const admcurve::DiscountCurveFn& discount, std::size_t i,
                               CdsMode mode, std::size_t rows = 0);

}  // namespace lp
