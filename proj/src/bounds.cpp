#include "admcurve/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "admcurve/errors.hpp"
#include "admcurve/tolerances.hpp"

namespace admcurve {

namespace {

void require_kind(const QuoteSet& quotes, QuoteKind kind) {
    if (quotes.kind() != kind) {
        throw InputError("expected " + to_string(kind) + " quotes, got " +
                         to_string(quotes.kind()));
    }
}

std::string at_index(const char* what, std::size_t i) {
    std::ostringstream os;
    os << what << " at quote " << i;
    return os.str();
}

/// H_i: accrual strictly between T_{i-1} and T_i on the payment grid.
double accrual_gap(const PaymentSchedule& schedule, std::size_t i) {
    double h = 0.0;
    for (std::size_t k = schedule.position(i - 1) + 1; k < schedule.position(i); ++k) {
        h += schedule.accrual(k);
    }
    return h;
}

/// Running state of the OIS recursion shared by bounds and detection.
struct OisSweep {
    std::vector<double> lower;  // P_min(T_i), exact values for i < i0
    std::vector<double> upper;  // P_max(T_i)
    std::vector<double> gaps;   // H_i
    ArbitrageReport report;
    std::optional<std::size_t> precondition_failure;
};

/// Runs the recursion up to the first detected problem. Never throws.
OisSweep sweep_ois(const QuoteSet& q) {
    const auto& sched = q.schedule();
    const std::size_t n = q.size();
    const std::size_t i0 = q.first_gap_index();
    const double slack = tolerances().arbitrage_slack;

    OisSweep out;
    out.lower.reserve(n);
    out.upper.reserve(n);
    double prev_lower = 1.0;  // P(T_0) = 1
    double prev_upper = 1.0;

    auto flag = [&](ArbitrageReport::Status status, std::size_t i, double threshold,
                    std::string reason) {
        out.report.status = status;
        out.report.index = i;
        out.report.quote = q.rate(i);
        out.report.threshold = threshold;
        out.report.reason = std::move(reason);
    };

    for (std::size_t i = 1; i <= n; ++i) {
        const double s = q.rate(i);
        const double delta = sched.accrual(sched.position(i));
        const double gap = accrual_gap(sched, i);
        out.gaps.push_back(gap);

        if (i == 1) {
            // Row 1 has no earlier maturity: the ratio term vanishes (P(T_0) = 1).
            const double lo = (1.0 - s * gap) / (1.0 + s * delta);
            const double hi = 1.0 / (1.0 + s * (gap + delta));
            out.lower.push_back(lo);
            out.upper.push_back(hi);
            if (lo > hi + slack) {
                flag(ArbitrageReport::Status::Arbitrage, i, 0.0,
                     "lower bound exceeds upper bound");
                return out;
            }
            prev_lower = lo;
            prev_upper = hi;
            continue;
        }

        const double s_prev = q.rate(i - 1);
        if (s_prev == 0.0) {
            if (s == 0.0) {
                out.lower.push_back(prev_lower);
                out.upper.push_back(prev_upper);
                continue;
            }
            flag(ArbitrageReport::Status::Degenerate, i, 0.0,
                 "zero quote followed by a positive quote");
            return out;
        }

        if (i < i0) {
            // S_i < (1/S_{i-1} + delta_i P/(1-P))^{-1}  <=>  P(T_i) > P(T_{i-1})
            const double p_prev = prev_lower;
            const double threshold =
                p_prev >= 1.0 ? 0.0 : 1.0 / (1.0 / s_prev + delta * p_prev / (1.0 - p_prev));
            const double p = (1.0 - (s / s_prev) * (1.0 - p_prev)) / (1.0 + s * delta);
            out.lower.push_back(p);
            out.upper.push_back(p);
            if (s < threshold) {
                flag(ArbitrageReport::Status::Arbitrage, i, threshold,
                     "implied discount factor increases");
                return out;
            }
            prev_lower = prev_upper = p;
            continue;
        }

        const double pmax_prev = prev_upper;
        const double threshold =
            pmax_prev >= 1.0
                ? 0.0
                : 1.0 / (1.0 / s_prev + (gap + delta) * pmax_prev / (1.0 - pmax_prev));
        if (!out.precondition_failure && !(1.0 - s_prev * gap > 0.0)) {
            out.precondition_failure = i;
        }
        const double lo =
            (1.0 - (s / s_prev) * (1.0 - (1.0 - s_prev * gap) * prev_lower)) / (1.0 + s * delta);
        const double hi = (1.0 - (s / s_prev) * (1.0 - pmax_prev)) / (1.0 + s * (gap + delta));
        out.lower.push_back(lo);
        out.upper.push_back(hi);
        if (s < threshold) {
            flag(ArbitrageReport::Status::Arbitrage, i, threshold,
                 "upper bound exceeds the previous upper bound");
            return out;
        }
        if (lo > hi + slack) {
            flag(ArbitrageReport::Status::Arbitrage, i, threshold,
                 "lower bound exceeds upper bound");
            return out;
        }
        prev_lower = lo;
        prev_upper = hi;
    }
    return out;
}

void add_rectangles(BoundsResult& result) {
    double prev_t = 0.0;
    double prev_upper = 1.0;
    for (const auto& e : result.entries) {
        result.rectangles.push_back({prev_t, e.lower, e.maturity, prev_upper});
        prev_t = e.maturity;
        prev_upper = e.upper;
    }
}

double clip_unit(double v, const char* name, std::size_t i, std::vector<std::string>& notes) {
    if (v >= 0.0 && v <= 1.0) return v;
    const double clipped = std::clamp(v, 0.0, 1.0);
    std::ostringstream os;
    os << name << " at quote " << i << " clipped from " << v << " to " << clipped;
    notes.push_back(os.str());
    return clipped;
}

}  // namespace

std::vector<double> ois_exact_prefix(const QuoteSet& quotes) {
    require_kind(quotes, QuoteKind::OIS);
    const auto& sched = quotes.schedule();
    const std::size_t last = quotes.first_gap_index() - 1;
    const double eq = tolerances().equality;

    std::vector<double> p;
    p.reserve(last);
    for (std::size_t i = 1; i <= last; ++i) {
        const double s = quotes.rate(i);
        const double delta = sched.accrual(i);
        double value = 0.0;
        if (i == 1) {
            value = 1.0 / (1.0 + s * delta);
        } else {
            const double s_prev = quotes.rate(i - 1);
            if (s_prev == 0.0) {
                if (s != 0.0) {
                    throw DegenerateQuoteError(
                        i, at_index("zero quote followed by a positive quote", i));
                }
                value = p.back();
            } else {
                value = (1.0 - (s / s_prev) * (1.0 - p.back())) / (1.0 + s * delta);
            }
        }
        if (!(value > 0.0 && value <= 1.0 + eq)) {
            throw ArbitrageError(i, at_index("discount factor outside (0, 1]", i));
        }
        p.push_back(value);
    }
    return p;
}

BoundsResult ois_model_free_bounds(const QuoteSet& quotes) {
    require_kind(quotes, QuoteKind::OIS);
    // Raises the degenerate and (0, 1] errors of the exact part first.
    const auto exact = ois_exact_prefix(quotes);
    const auto sweep = sweep_ois(quotes);

    if (sweep.precondition_failure &&
        (sweep.report.clean() || *sweep.precondition_failure <= *sweep.report.index)) {
        const std::size_t i = *sweep.precondition_failure;
        throw PreconditionError(i, at_index("1 - S_{i-1} H_i must be positive", i));
    }
    switch (sweep.report.status) {
        case ArbitrageReport::Status::Clean:
            break;
        case ArbitrageReport::Status::Degenerate:
            throw DegenerateQuoteError(*sweep.report.index,
                                       at_index(sweep.report.reason.c_str(), *sweep.report.index));
        case ArbitrageReport::Status::Arbitrage:
            throw ArbitrageError(*sweep.report.index,
                                 at_index(sweep.report.reason.c_str(), *sweep.report.index));
    }

    BoundsResult result;
    result.kind = QuoteKind::OIS;
    result.accrual_gaps = sweep.gaps;
    const std::size_t i0 = quotes.first_gap_index();
    for (std::size_t i = 1; i <= quotes.size(); ++i) {
        BoundEntry e;
        e.maturity = quotes.maturity(i);
        if (i < i0) {
            e.exact = true;
            e.lower = e.upper = exact[i - 1];
        } else {
            e.lower = clip_unit(sweep.lower[i - 1], "P_min", i, result.diagnostics);
            e.upper = clip_unit(sweep.upper[i - 1], "P_max", i, result.diagnostics);
        }
        result.entries.push_back(e);
    }
    add_rectangles(result);
    return result;
}

ArbitrageReport ois_detect_arbitrage(const QuoteSet& quotes) {
    require_kind(quotes, QuoteKind::OIS);
    return sweep_ois(quotes).report;
}

std::vector<double> ois_extremal_grid_values(const QuoteSet& quotes, const BoundsResult& bounds,
                                             Extremum which) {
    require_kind(quotes, QuoteKind::OIS);
    const auto& sched = quotes.schedule();
    std::vector<double> values(sched.size());
    double prev = 1.0;
    for (std::size_t i = 1; i <= quotes.size(); ++i) {
        const double at_maturity =
            which == Extremum::Lower ? bounds.lower(i) : bounds.upper(i);
        const double between = which == Extremum::Lower ? prev : at_maturity;
        for (std::size_t k = sched.position(i - 1) + 1; k < sched.position(i); ++k) {
            values[k - 1] = between;
        }
        values[sched.position(i) - 1] = at_maturity;
        prev = at_maturity;
    }
    return values;
}

double ois_extremal_value(const QuoteSet& quotes, const BoundsResult& bounds, Extremum which,
                          double t) {
    if (t < 0.0 || t > quotes.maturity(quotes.size())) {
        throw DomainError("extremal curve evaluated outside [0, T_n]");
    }
    if (t == 0.0) return 1.0;
    const auto& dates = quotes.schedule().dates();
    const auto grid = ois_extremal_grid_values(quotes, bounds, which);
    if (which == Extremum::Lower) {
        // Right-continuous step: value of the last grid date <= t.
        const auto it = std::upper_bound(dates.begin(), dates.end(), t);
        if (it == dates.begin()) return 1.0;
        return grid[static_cast<std::size_t>(it - dates.begin()) - 1];
    }
    // Left-continuous step: value of the first grid date >= t.
    const auto it = std::lower_bound(dates.begin(), dates.end(), t);
    return grid[static_cast<std::size_t>(it - dates.begin())];
}

BoundsResult cds_model_free_bounds(const QuoteSet& quotes, const DiscountCurveFn& discount) {
    require_kind(quotes, QuoteKind::CDS);
    const auto& sched = quotes.schedule();
    const std::size_t n = quotes.size();
    const double lgd = 1.0 - *quotes.recovery();
    const double slack = tolerances().arbitrage_slack;

    BoundsResult result;
    result.kind = QuoteKind::CDS;

    // M_i and N_i with T_0 = 0 and p_0 := 1.
    std::vector<double> pd_maturity(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) pd_maturity[i] = discount.discount(quotes.maturity(i));
    for (std::size_t i = 1; i <= n; ++i) {
        result.discount_drops.push_back(pd_maturity[i - 1] - pd_maturity[i]);
        const std::size_t from = i == 1 ? 1 : sched.position(i - 1);
        double sum = 0.0;
        for (std::size_t k = from; k <= sched.position(i) - 1; ++k) {
            sum += sched.accrual(k) * discount.discount(sched.date(k));
        }
        result.premium_sums.push_back(sum);
    }
    const auto& M = result.discount_drops;
    const auto& N = result.premium_sums;

    std::vector<double> q_min(n + 1, 0.0);
    std::vector<double> q_max(n + 1, 1.0);  // Q_max(T_0) = 1
    for (std::size_t i = 1; i <= n; ++i) {
        const double s = quotes.rate(i);
        const double delta = sched.accrual(sched.position(i));

        double num_min = lgd;
        for (std::size_t k = 1; k <= i; ++k) num_min -= (lgd * M[k - 1] + s * N[k - 1]) * q_max[k - 1];
        const double den_min = pd_maturity[i] * (lgd + s * delta);

        double num_max = lgd;
        for (std::size_t k = 1; k < i; ++k) num_max -= (lgd * M[k - 1] + s * N[k - 1]) * q_min[k];
        const double den_max = pd_maturity[i - 1] * lgd + s * (N[i - 1] + delta * pd_maturity[i]);

        if (num_max < 0.0) {
            throw ArbitrageError(i, at_index("negative numerator of Q_max", i));
        }
        const double lo = num_min / den_min;
        const double hi = num_max / den_max;
        if (lo > hi + slack) {
            throw ArbitrageError(i, at_index("Q_min exceeds Q_max", i));
        }
        q_min[i] = clip_unit(lo, "Q_min", i, result.diagnostics);
        q_max[i] = clip_unit(hi, "Q_max", i, result.diagnostics);
        result.entries.push_back({quotes.maturity(i), false, q_min[i], q_max[i]});
    }
    add_rectangles(result);
    return result;
}

std::pair<double, double> rectangle_envelope(const BoundsResult& bounds, double t) {
    constexpr double snap = 1e-12;
    if (bounds.entries.empty()) throw InputError("empty bounds");
    if (t < 0.0 || t > bounds.entries.back().maturity + snap) {
        throw DomainError("envelope requested outside [0, T_n]");
    }
    if (t <= snap) return {1.0, 1.0};
    for (const auto& e : bounds.entries) {
        if (std::abs(t - e.maturity) <= snap) return {e.lower, e.upper};
    }
    for (const auto& r : bounds.rectangles) {
        if (t > r.t_left && t < r.t_right) return {r.v_bottom, r.v_top};
    }
    throw DomainError("no rectangle covers t");
}

}  // namespace admcurve
