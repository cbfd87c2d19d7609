/**
 * @file affine_models.hpp
 * @brief Curves generated by affine short-rate (or intensity) models whose
 *        mean-reversion level is a step function of time.
 *
 * Two families are supported:
 *   - Levy-driven OU:  dX = a (b(t) - X) dt + sigma dY_{ct}
 *   - extended CIR:    dX = a (b(t) - X) dt + sigma sqrt(X) dW
 * with b(t) = b_i on [T_{i-1}, T_i). The curve value P(0, t) is a zero-coupon
 * price or a survival probability depending on what X models.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "admcurve/levy.hpp"
#include "admcurve/term_structures.hpp"

namespace admcurve {

struct LevyOU {
    LevyDriver driver = LevyDriver::brownian();
    double c = 1.0;  // time change t -> c t of the driver
};

struct ExtendedCIR {};

using ModelFamily = std::variant<LevyOU, ExtendedCIR>;

class ModelSpec {
public:
    static ModelSpec levy_ou(LevyDriver driver, double c, double x0, double a, double sigma);
    static ModelSpec extended_cir(double x0, double a, double sigma);

    const ModelFamily& family() const noexcept { return family_; }
    bool is_levy_ou() const noexcept { return std::holds_alternative<LevyOU>(family_); }
    const LevyOU& levy() const { return std::get<LevyOU>(family_); }

    double x0() const noexcept { return x0_; }
    double a() const noexcept { return a_; }
    double sigma() const noexcept { return sigma_; }
    /// sqrt(a^2 + 2 sigma^2); meaningful for the CIR family.
    double h() const noexcept { return h_; }

    std::string describe() const;

private:
    ModelSpec(ModelFamily family, double x0, double a, double sigma);

    ModelFamily family_;
    double x0_, a_, sigma_, h_;
};

/// CIR loading 2(1 - e^{-hs}) / (h + a + (h - a) e^{-hs}).
double cir_phi(double a, double h, double s);
/// Derivative of cir_phi in s: 4 h^2 e^{-hs} / (h + a + (h - a) e^{-hs})^2.
double cir_phi_deriv(double a, double h, double s);
/// 2a [ s/(h+a) + log((h + a + (h - a) e^{-hs}) / 2h) / sigma^2 ]; d/ds = a cir_phi.
double cir_eta(double a, double h, double sigma, double s);

/// Model curve with knots 0 = T_0 < T_1 < ... < T_n and levels b_1..b_n.
/// Evaluable on [0, T_n]; anything outside raises DomainError.
class CalibratedCurve {
public:
    CalibratedCurve(ModelSpec spec, std::vector<double> knots, std::vector<double> levels);

    const ModelSpec& spec() const noexcept { return spec_; }
    /// T_1..T_n (T_0 = 0 is implicit).
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& levels() const noexcept { return levels_; }
    double horizon() const noexcept { return knots_.back(); }
    /// T_i for 0 <= i <= n.
    double knot(std::size_t i) const { return i == 0 ? 0.0 : knots_.at(i - 1); }

    /// P(0, t).
    double value(double t) const;
    /// -log P(0, t).
    double exponent(double t) const;
    /// Instantaneous forward f(0, t).
    double forward(double t) const;
    /// Continuously compounded spot rate -log P / t (the forward at t = 0).
    double spot_rate(double t) const;
    /// df/dt at t computed with the level of knot interval `interval`
    /// (1-based), so one-sided values at knots are available.
    double forward_slope(double t, std::size_t interval) const;

    /// 1-based interval i with T_{i-1} <= t < T_i (n for t = T_n).
    std::size_t interval_of(double t) const;

    /// Copy with one more knot and level appended.
    CalibratedCurve extended(double knot, double level) const;
    /// Copy with the last level replaced.
    CalibratedCurve with_last_level(double level) const;

private:
    void check_domain(double t) const;
    /// c * psi(t) for Levy-OU (zero for CIR).
    double jump_term(double t) const;

    ModelSpec spec_;
    std::vector<double> knots_;
    std::vector<double> levels_;
};

DiscountCurveFn as_discount_curve(const CalibratedCurve& curve);

/// Forward rate on interval i written as K_i(x) with x = exp(-a (t - T_{i-1})).
struct LevyForwardSegment {
    std::size_t interval = 0;
    double t_start = 0.0;  // T_{i-1}
    double t_end = 0.0;    // T_i
    double level = 0.0;    // b_i
    double slope_coeff = 0.0;  // f(T_{i-1}) + c kappa(-sigma phi(T_{i-1})) - b_i
    double decay_start = 0.0;  // exp(-a T_{i-1})
    double a = 0.0;
    double sigma = 0.0;
    LevyOU model;

    double x_of(double t) const;
    double t_of(double x) const;
    /// x at T_i, the lower end of the x-domain.
    double x_end() const;
    double K(double x) const;
    double K_prime(double x) const;
};

LevyForwardSegment levy_forward_segment(const CalibratedCurve& curve, std::size_t interval);

struct Verdict {
    bool admissible = true;
    std::optional<std::size_t> interval;  // 1-based knot interval that fails
    std::optional<double> t_star;         // where the forward is non-positive
    double forward_at_t_star = 0.0;
    std::string reason;
};

/// Exact positivity check of the Levy-OU forward curve on interval i:
/// endpoint values, endpoint slopes, and the unique interior stationary point
/// when the slopes change sign.
Verdict verify_interval_levy_ou(const CalibratedCurve& curve, std::size_t interval);

/// All intervals; first failing interval reported.
Verdict verify_no_arbitrage_levy_ou(const CalibratedCurve& curve);

/// Sufficient condition for the CIR family: positive parameters and levels.
Verdict verify_no_arbitrage_cir(const CalibratedCurve& curve);

/// Dispatches on the model family.
Verdict verify_no_arbitrage(const CalibratedCurve& curve);
/// Same restricted to one knot interval.
Verdict verify_interval(const CalibratedCurve& curve, std::size_t interval);

}  // namespace admcurve
