#include "admcurve/affine_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "admcurve/errors.hpp"

namespace admcurve {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr int kBisectionIterations = 200;
constexpr double kStationaryTolerance = 1e-12;

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        std::ostringstream os;
        os << name << " must be positive, got " << v;
        throw InputError(os.str());
    }
}

double cir_denominator(double a, double h, double e) { return h + a + (h - a) * e; }

/// d^2/ds^2 of cir_phi.
double cir_phi_second(double a, double h, double s) {
    const double e = std::exp(-h * s);
    const double d = cir_denominator(a, h, e);
    return 4.0 * h * h * e * (-h * d + 2.0 * h * (h - a) * e) / (d * d * d);
}

Verdict violation(std::size_t interval, double t, double f, std::string reason) {
    Verdict v;
    v.admissible = false;
    v.interval = interval;
    v.t_star = t;
    v.forward_at_t_star = f;
    v.reason = std::move(reason);
    return v;
}

}  // namespace

ModelSpec::ModelSpec(ModelFamily family, double x0, double a, double sigma)
    : family_(std::move(family)), x0_(x0), a_(a), sigma_(sigma), h_(0.0) {
    if (!std::isfinite(x0) || x0 < 0.0) throw InputError("X0 must be non-negative");
    require_positive(a, "a");
    require_positive(sigma, "sigma");
    if (const auto* levy = std::get_if<LevyOU>(&family_)) require_positive(levy->c, "c");
    h_ = std::sqrt(a * a + 2.0 * sigma * sigma);
}

ModelSpec ModelSpec::levy_ou(LevyDriver driver, double c, double x0, double a, double sigma) {
    return ModelSpec(LevyOU{driver, c}, x0, a, sigma);
}

ModelSpec ModelSpec::extended_cir(double x0, double a, double sigma) {
    return ModelSpec(ExtendedCIR{}, x0, a, sigma);
}

std::string ModelSpec::describe() const {
    std::ostringstream os;
    if (is_levy_ou()) {
        os << "levy-ou(driver=" << levy().driver.name() << ", c=" << levy().c << ")";
    } else {
        os << "cir";
    }
    os << " x0=" << x0_ << " a=" << a_ << " sigma=" << sigma_;
    return os.str();
}

double cir_phi(double a, double h, double s) {
    const double e = std::exp(-h * s);
    return -2.0 * std::expm1(-h * s) / cir_denominator(a, h, e);
}

double cir_phi_deriv(double a, double h, double s) {
    const double e = std::exp(-h * s);
    const double d = cir_denominator(a, h, e);
    return 4.0 * h * h * e / (d * d);
}

double cir_eta(double a, double h, double sigma, double s) {
    const double e = std::exp(-h * s);
    return 2.0 * a * (s / (h + a) + std::log(cir_denominator(a, h, e) / (2.0 * h)) / (sigma * sigma));
}

CalibratedCurve::CalibratedCurve(ModelSpec spec, std::vector<double> knots,
                                 std::vector<double> levels)
    : spec_(std::move(spec)), knots_(std::move(knots)), levels_(std::move(levels)) {
    if (knots_.empty()) throw InputError("a curve needs at least one knot");
    if (knots_.size() != levels_.size()) throw InputError("one level per knot is required");
    double prev = 0.0;
    for (double t : knots_) {
        if (!(t > prev)) throw InputError("knots must be strictly increasing and positive");
        prev = t;
    }
    for (double b : levels_) {
        if (!std::isfinite(b)) throw InputError("levels must be finite");
    }
}

void CalibratedCurve::check_domain(double t) const {
    if (!(t >= 0.0) || t > horizon() + kDomainSlack) {
        std::ostringstream os;
        os << "t = " << t << " outside the curve domain [0, " << horizon() << "]";
        throw DomainError(os.str());
    }
}

std::size_t CalibratedCurve::interval_of(double t) const {
    check_domain(t);
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const auto i = static_cast<std::size_t>(it - knots_.begin()) + 1;
    return std::min(i, knots_.size());
}

double CalibratedCurve::jump_term(double t) const {
    if (!spec_.is_levy_ou()) return 0.0;
    const auto& m = spec_.levy();
    const double p = m.driver.family() == LevyFamily::BrownianMotion
                         ? psi_brownian(spec_.a(), spec_.sigma(), t)
                         : psi(m.driver, spec_.a(), spec_.sigma(), t);
    return m.c * p;
}

double CalibratedCurve::exponent(double t) const {
    const std::size_t i = interval_of(t);
    t = std::min(t, horizon());
    if (t == 0.0) return 0.0;
    const double a = spec_.a();
    if (spec_.is_levy_ou()) {
        double total = spec_.x0() * ou_phi(a, t);
        for (std::size_t k = 1; k < i; ++k) {
            total += levels_[k - 1] * (ou_xi(a, t - knot(k - 1)) - ou_xi(a, t - knot(k)));
        }
        total += levels_[i - 1] * ou_xi(a, t - knot(i - 1));
        return total + jump_term(t);
    }
    const double h = spec_.h();
    const double s = spec_.sigma();
    double total = spec_.x0() * cir_phi(a, h, t);
    for (std::size_t k = 1; k < i; ++k) {
        total += levels_[k - 1] * (cir_eta(a, h, s, t - knot(k - 1)) - cir_eta(a, h, s, t - knot(k)));
    }
    return total + levels_[i - 1] * cir_eta(a, h, s, t - knot(i - 1));
}

double CalibratedCurve::value(double t) const {
    if (t == 0.0) return 1.0;
    return std::exp(-exponent(t));
}

double CalibratedCurve::forward(double t) const {
    const std::size_t i = interval_of(t);
    t = std::min(t, horizon());
    const double a = spec_.a();
    if (spec_.is_levy_ou()) {
        double total = spec_.x0() * std::exp(-a * t);
        for (std::size_t k = 1; k < i; ++k) {
            total += a * levels_[k - 1] * (ou_phi(a, t - knot(k - 1)) - ou_phi(a, t - knot(k)));
        }
        total += a * levels_[i - 1] * ou_phi(a, t - knot(i - 1));
        const auto& m = spec_.levy();
        return total - m.c * cumulant(m.driver, -spec_.sigma() * ou_phi(a, t));
    }
    const double h = spec_.h();
    double total = spec_.x0() * cir_phi_deriv(a, h, t);
    for (std::size_t k = 1; k < i; ++k) {
        total += a * levels_[k - 1] * (cir_phi(a, h, t - knot(k - 1)) - cir_phi(a, h, t - knot(k)));
    }
    return total + a * levels_[i - 1] * cir_phi(a, h, t - knot(i - 1));
}

double CalibratedCurve::spot_rate(double t) const {
    if (t == 0.0) return forward(0.0);
    return exponent(t) / t;
}

double CalibratedCurve::forward_slope(double t, std::size_t interval) const {
    check_domain(t);
    if (interval < 1 || interval > knots_.size()) throw InputError("interval out of range");
    const double a = spec_.a();
    const std::size_t i = interval;
    if (spec_.is_levy_ou()) {
        const auto decay = [&](double s) { return std::exp(-a * s); };
        double total = -a * spec_.x0() * decay(t);
        for (std::size_t k = 1; k < i; ++k) {
            total += a * levels_[k - 1] * (decay(t - knot(k - 1)) - decay(t - knot(k)));
        }
        total += a * levels_[i - 1] * decay(t - knot(i - 1));
        const auto& m = spec_.levy();
        const double sigma = spec_.sigma();
        return total + m.c * sigma * decay(t) * cumulant_deriv(m.driver, -sigma * ou_phi(a, t));
    }
    const double h = spec_.h();
    double total = spec_.x0() * cir_phi_second(a, h, t);
    for (std::size_t k = 1; k < i; ++k) {
        total += a * levels_[k - 1] *
                 (cir_phi_deriv(a, h, t - knot(k - 1)) - cir_phi_deriv(a, h, t - knot(k)));
    }
    return total + a * levels_[i - 1] * cir_phi_deriv(a, h, t - knot(i - 1));
}

CalibratedCurve CalibratedCurve::extended(double knot, double level) const {
    auto knots = knots_;
    auto levels = levels_;
    knots.push_back(knot);
    levels.push_back(level);
    return CalibratedCurve(spec_, std::move(knots), std::move(levels));
}

CalibratedCurve CalibratedCurve::with_last_level(double level) const {
    auto levels = levels_;
    levels.back() = level;
    return CalibratedCurve(spec_, knots_, std::move(levels));
}

DiscountCurveFn as_discount_curve(const CalibratedCurve& curve) {
    return DiscountCurveFn([curve](double t) { return curve.value(t); },
                           [curve](double t) { return curve.forward(t); }, curve.spec().describe());
}

double LevyForwardSegment::x_of(double t) const { return std::exp(-a * (t - t_start)); }

double LevyForwardSegment::t_of(double x) const { return t_start - std::log(x) / a; }

double LevyForwardSegment::x_end() const { return x_of(t_end); }

double LevyForwardSegment::K(double x) const {
    const double theta = -(sigma / a) * (1.0 - decay_start * x);
    return level + slope_coeff * x - model.c * cumulant(model.driver, theta);
}

double LevyForwardSegment::K_prime(double x) const {
    const double theta = -(sigma / a) * (1.0 - decay_start * x);
    return slope_coeff - model.c * (sigma / a) * decay_start * cumulant_deriv(model.driver, theta);
}

LevyForwardSegment levy_forward_segment(const CalibratedCurve& curve, std::size_t interval) {
    const auto& spec = curve.spec();
    if (!spec.is_levy_ou()) throw InputError("forward segments exist for the Levy-OU family only");
    if (interval < 1 || interval > curve.knots().size()) throw InputError("interval out of range");
    LevyForwardSegment seg;
    seg.interval = interval;
    seg.t_start = curve.knot(interval - 1);
    seg.t_end = curve.knot(interval);
    seg.level = curve.levels()[interval - 1];
    seg.a = spec.a();
    seg.sigma = spec.sigma();
    seg.model = spec.levy();
    seg.decay_start = std::exp(-seg.a * seg.t_start);
    const double f_start = curve.forward(seg.t_start);
    const double jump = seg.model.c *
                        cumulant(seg.model.driver, -seg.sigma * ou_phi(seg.a, seg.t_start));
    seg.slope_coeff = f_start + jump - seg.level;
    return seg;
}

Verdict verify_interval_levy_ou(const CalibratedCurve& curve, std::size_t interval) {
    if (!curve.spec().is_levy_ou()) throw InputError("expected a Levy-OU curve");
    const auto seg = levy_forward_segment(curve, interval);

    const double f_start = seg.K(1.0);
    if (!(f_start > 0.0)) {
        return violation(interval, seg.t_start, f_start, "non-positive forward at interval start");
    }
    const double x_end = seg.x_end();
    const double f_end = seg.K(x_end);
    if (!(f_end > 0.0)) {
        return violation(interval, seg.t_end, f_end, "non-positive forward at interval end");
    }
    // df/dt = -a x K'(x): the slope signs are those of -K'.
    const double k_start = seg.K_prime(1.0);
    const double k_end = seg.K_prime(x_end);
    if (k_start * k_end >= 0.0) return {};

    double lo = x_end;
    double hi = 1.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < kBisectionIterations; ++it) {
        x = 0.5 * (lo + hi);
        const double kx = seg.K_prime(x);
        if (std::abs(kx) < kStationaryTolerance) break;
        if ((kx < 0.0) == (k_end < 0.0)) {
            lo = x;
        } else {
            hi = x;
        }
    }
    const double f_star = seg.K(x);
    if (!(f_star > 0.0)) {
        return violation(interval, seg.t_of(x), f_star, "non-positive forward at interior minimum");
    }
    return {};
}

Verdict verify_no_arbitrage_levy_ou(const CalibratedCurve& curve) {
    if (!curve.spec().is_levy_ou()) throw InputError("expected a Levy-OU curve");
    if (!(curve.spec().x0() > 0.0)) {
        return violation(1, 0.0, curve.spec().x0(), "X0 must be positive");
    }
    for (std::size_t i = 1; i <= curve.knots().size(); ++i) {
        auto v = verify_interval_levy_ou(curve, i);
        if (!v.admissible) return v;
    }
    return {};
}

namespace {

Verdict cir_level_check(const CalibratedCurve& curve, std::size_t interval) {
    const double b = curve.levels()[interval - 1];
    if (b > 0.0) return {};
    Verdict v;
    v.admissible = false;
    v.interval = interval;
    std::ostringstream os;
    os << "mean-reversion level " << b << " is not positive";
    v.reason = os.str();
    return v;
}

Verdict cir_parameter_check(const CalibratedCurve& curve) {
    const auto& s = curve.spec();
    if (s.x0() > 0.0 && s.a() > 0.0 && s.sigma() > 0.0) return {};
    Verdict v;
    v.admissible = false;
    v.interval = 1;
    v.reason = "CIR parameters must be positive";
    return v;
}

}  // namespace

Verdict verify_no_arbitrage_cir(const CalibratedCurve& curve) {
    if (curve.spec().is_levy_ou()) throw InputError("expected an extended CIR curve");
    auto v = cir_parameter_check(curve);
    if (!v.admissible) return v;
    for (std::size_t i = 1; i <= curve.knots().size(); ++i) {
        v = cir_level_check(curve, i);
        if (!v.admissible) return v;
    }
    return {};
}

Verdict verify_no_arbitrage(const CalibratedCurve& curve) {
    return curve.spec().is_levy_ou() ? verify_no_arbitrage_levy_ou(curve)
                                     : verify_no_arbitrage_cir(curve);
}

Verdict verify_interval(const CalibratedCurve& curve, std::size_t interval) {
    if (interval < 1 || interval > curve.knots().size()) throw InputError("interval out of range");
    if (curve.spec().is_levy_ou()) {
        if (interval == 1 && !(curve.spec().x0() > 0.0)) {
            return violation(1, 0.0, curve.spec().x0(), "X0 must be positive");
        }
        return verify_interval_levy_ou(curve, interval);
    }
    auto v = cir_parameter_check(curve);
    if (!v.admissible) return v;
    return cir_level_check(curve, interval);
}

}  // namespace admcurve
