#include "admcurve/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "admcurve/errors.hpp"
#include "admcurve/quadrature.hpp"

namespace admcurve {

namespace {

constexpr double kTimeSnap = 1e-12;

std::string maturity_tag(const char* kind, double maturity) {
    std::ostringstream os;
    os << kind << ' ' << maturity << 'y';
    return os.str();
}

void require_kind(const QuoteSet& quotes, QuoteKind kind) {
    if (quotes.kind() != kind) {
        throw InputError("expected " + to_string(kind) + " quotes, got " +
                         to_string(quotes.kind()));
    }
}

double annuity(const PaymentSchedule& sched, std::size_t last,
               const std::function<double(double)>& curve) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= last; ++k) sum += sched.accrual(k) * curve(sched.date(k));
    return sum;
}

double relative_error(double implied, double quote) {
    const double diff = std::abs(implied - quote);
    return quote == 0.0 ? diff : diff / std::abs(quote);
}

struct Root {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

/// Illinois regula falsi on a sign-changing bracket, with a bisection step
/// whenever the bracket fails to halve twice in a row.
Root solve_bracketed(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, const BootstrapConfig& cfg, std::size_t instrument) {
    Root best{std::abs(fa) < std::abs(fb) ? a : b, std::abs(fa) < std::abs(fb) ? fa : fb, 0};
    int retained = 0;  // -1: a moved last, +1: b moved last
    int slow = 0;
    double width = std::abs(b - a);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        best.iterations = it;
        double x = (a * fb - b * fa) / (fb - fa);
        if (slow >= 2 || !(x > std::min(a, b) && x < std::max(a, b))) {
            x = 0.5 * (a + b);
            slow = 0;
        }
        const double fx = f(x);
        if (std::abs(fx) < std::abs(best.fx)) {
            best.x = x;
            best.fx = fx;
        }
        if (fx == 0.0) break;
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
            if (retained == -1) fb *= 0.5;
            retained = -1;
        } else {
            b = x;
            fb = fx;
            if (retained == +1) fa *= 0.5;
            retained = +1;
        }
        const double new_width = std::abs(b - a);
        slow = new_width > 0.5 * width ? slow + 1 : 0;
        width = new_width;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    if (!(std::abs(best.fx) <= cfg.residual_tolerance)) {
        std::ostringstream os;
        os << "instrument " << instrument << ": residual " << best.fx << " above tolerance "
           << cfg.residual_tolerance << " after " << best.iterations << " iterations";
        throw CalibrationError(instrument, os.str());
    }
    return best;
}

}  // namespace

std::size_t MarketFitSystem::last_nonzero(std::size_t i) const {
    for (std::size_t k = cols; k-- > 0;) {
        if (at(i, k) != 0.0) return k;
    }
    return static_cast<std::size_t>(-1);
}

std::vector<double> MarketFitSystem::residuals(const std::vector<double>& grid_values) const {
    if (grid_values.size() != cols) throw InputError("grid values do not match the system width");
    std::vector<double> r(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        double sum = -B[i];
        for (std::size_t k = 0; k < cols; ++k) sum += at(i, k) * grid_values[k];
        r[i] = sum;
    }
    return r;
}

MarketFitSystem assemble_ois_system(const QuoteSet& quotes) {
    require_kind(quotes, QuoteKind::OIS);
    const auto& sched = quotes.schedule();
    MarketFitSystem sys;
    sys.rows = quotes.size();
    sys.cols = sched.size();
    sys.A.assign(sys.rows * sys.cols, 0.0);
    sys.B.assign(sys.rows, 1.0);
    sys.grid = sched.dates();
    for (std::size_t i = 1; i <= sys.rows; ++i) {
        const double s = quotes.rate(i);
        const std::size_t p = sched.position(i);
        for (std::size_t k = 1; k < p; ++k) sys.A[(i - 1) * sys.cols + k - 1] = s * sched.accrual(k);
        sys.A[(i - 1) * sys.cols + p - 1] = s * sched.accrual(p) + 1.0;
        sys.tags.push_back(maturity_tag("OIS", quotes.maturity(i)));
    }
    return sys;
}

MarketFitSystem assemble_cds_system(const QuoteSet& quotes, const DiscountCurveFn& discount) {
    require_kind(quotes, QuoteKind::CDS);
    const auto& sched = quotes.schedule();
    const double lgd = 1.0 - *quotes.recovery();
    MarketFitSystem sys;
    sys.rows = quotes.size();
    sys.cols = sched.size();
    sys.A.assign(sys.rows * sys.cols, 0.0);
    sys.B.assign(sys.rows, lgd);
    sys.grid = sched.dates();
    for (std::size_t i = 1; i <= sys.rows; ++i) {
        const double s = quotes.rate(i);
        const std::size_t p = sched.position(i);
        for (std::size_t k = 1; k <= p; ++k) {
            sys.A[(i - 1) * sys.cols + k - 1] =
                s * sched.accrual(k) * discount.discount(sched.date(k));
        }
        sys.A[(i - 1) * sys.cols + p - 1] += lgd * discount.discount(quotes.maturity(i));
        sys.tags.push_back(maturity_tag("CDS", quotes.maturity(i)));
    }
    return sys;
}

CdsMarketFit::CdsMarketFit(QuoteSet quotes, DiscountCurveFn discount,
                           std::size_t panels_per_period)
    : quotes_(std::move(quotes)),
      discount_(std::move(discount)),
      panels_(std::max<std::size_t>(1, panels_per_period)),
      system_(assemble_cds_system(quotes_, discount_)) {}

double CdsMarketFit::protection_integral(std::size_t i,
                                         const std::function<double(double)>& survival) const {
    const auto& sched = quotes_.schedule();
    const auto integrand = [&](double t) {
        return discount_.forward(t) * discount_.discount(t) * survival(t);
    };
    double total = 0.0;
    double prev = 0.0;
    for (std::size_t k = 1; k <= sched.position(i); ++k) {
        total += gauss_legendre_composite(integrand, prev, sched.date(k), panels_);
        prev = sched.date(k);
    }
    if (!std::isfinite(total)) throw QuadratureError("protection integral is not finite", total);
    return total;
}

double CdsMarketFit::risky_annuity(std::size_t i,
                                   const std::function<double(double)>& survival) const {
    const auto& sched = quotes_.schedule();
    double sum = 0.0;
    for (std::size_t k = 1; k <= sched.position(i); ++k) {
        sum += sched.accrual(k) * discount_.discount(sched.date(k)) * survival(sched.date(k));
    }
    return sum;
}

double CdsMarketFit::residual(std::size_t i, const std::function<double(double)>& survival) const {
    const double lgd = 1.0 - *quotes_.recovery();
    const double t = quotes_.maturity(i);
    return quotes_.rate(i) * risky_annuity(i, survival) +
           lgd * discount_.discount(t) * survival(t) + lgd * protection_integral(i, survival) -
           lgd;
}

double CdsMarketFit::fair_spread(std::size_t i,
                                 const std::function<double(double)>& survival) const {
    const double lgd = 1.0 - *quotes_.recovery();
    const double t = quotes_.maturity(i);
    const double protection =
        lgd * (1.0 - discount_.discount(t) * survival(t) - protection_integral(i, survival));
    return protection / risky_annuity(i, survival);
}

std::vector<Instrument> ois_instruments(const QuoteSet& quotes) {
    require_kind(quotes, QuoteKind::OIS);
    const auto sched = std::make_shared<PaymentSchedule>(quotes.schedule());
    std::vector<Instrument> out;
    for (std::size_t i = 1; i <= quotes.size(); ++i) {
        Instrument ins;
        ins.maturity = quotes.maturity(i);
        ins.quote = quotes.rate(i);
        ins.tag = maturity_tag("OIS", ins.maturity);
        const double s = ins.quote;
        const std::size_t p = sched->position(i);
        ins.residual = [sched, s, p](const CalibratedCurve& c) {
            double sum = 0.0;
            for (std::size_t k = 1; k < p; ++k) sum += sched->accrual(k) * c.value(sched->date(k));
            return s * sum + (s * sched->accrual(p) + 1.0) * c.value(sched->date(p)) - 1.0;
        };
        ins.implied_quote = [sched, p](const CalibratedCurve& c) {
            const auto curve = [&](double t) { return c.value(t); };
            return (1.0 - c.value(sched->date(p))) / annuity(*sched, p, curve);
        };
        out.push_back(std::move(ins));
    }
    return out;
}

std::vector<Instrument> cds_instruments(const CdsMarketFit& fit) {
    const auto shared = std::make_shared<CdsMarketFit>(fit);
    std::vector<Instrument> out;
    const auto& quotes = shared->quotes();
    for (std::size_t i = 1; i <= quotes.size(); ++i) {
        Instrument ins;
        ins.maturity = quotes.maturity(i);
        ins.quote = quotes.rate(i);
        ins.tag = maturity_tag("CDS", ins.maturity);
        ins.residual = [shared, i](const CalibratedCurve& c) {
            return shared->residual(i, [&](double t) { return c.value(t); });
        };
        ins.implied_quote = [shared, i](const CalibratedCurve& c) {
            return shared->fair_spread(i, [&](double t) { return c.value(t); });
        };
        out.push_back(std::move(ins));
    }
    return out;
}

Instrument anchor_instrument(double t, double value) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("anchor time must be positive");
    if (!(value > 0.0 && value <= 1.0)) throw InputError("anchor value must lie in (0, 1]");
    Instrument ins;
    ins.maturity = t;
    ins.quote = value;
    std::ostringstream os;
    os << "anchor " << t << 'y';
    ins.tag = os.str();
    ins.residual = [t, value](const CalibratedCurve& c) { return c.value(t) - value; };
    ins.implied_quote = [t](const CalibratedCurve& c) { return c.value(t); };
    return ins;
}

std::vector<Instrument> merge_instruments(std::vector<Instrument> base,
                                          std::vector<Instrument> extra) {
    for (auto& e : extra) base.push_back(std::move(e));
    std::stable_sort(base.begin(), base.end(),
                     [](const Instrument& l, const Instrument& r) { return l.maturity < r.maturity; });
    for (std::size_t k = 1; k < base.size(); ++k) {
        if (base[k].maturity - base[k - 1].maturity <= kTimeSnap) {
            throw InputError("two instruments share maturity " + base[k].tag);
        }
    }
    return base;
}

double CalibrationResult::max_repricing_error() const {
    double worst = 0.0;
    for (const auto& r : instruments) worst = std::max(worst, r.repricing_error);
    return worst;
}

CalibrationResult bootstrap(const std::vector<Instrument>& instruments, const ModelSpec& spec,
                            const BootstrapConfig& cfg) {
    if (instruments.empty()) throw InputError("nothing to calibrate");
    if (!(cfg.residual_tolerance > 0.0) || cfg.max_iterations < 1 ||
        !(cfg.bracket_lo < cfg.bracket_hi) || !(cfg.max_bracket_lo < cfg.max_bracket_hi)) {
        throw InputError("invalid bootstrap configuration");
    }
    for (std::size_t k = 1; k < instruments.size(); ++k) {
        if (!(instruments[k].maturity > instruments[k - 1].maturity)) {
            throw InputError("instruments must have strictly increasing maturities");
        }
    }

    const auto start = std::chrono::steady_clock::now();
    std::vector<double> knots;
    std::vector<double> levels;
    std::vector<int> iterations;

    for (std::size_t k = 1; k <= instruments.size(); ++k) {
        const auto& ins = instruments[k - 1];
        knots.push_back(ins.maturity);
        levels.push_back(0.0);
        const CalibratedCurve base(spec, knots, levels);
        const auto f = [&](double b) { return ins.residual(base.with_last_level(b)); };

        const double guess = k == 1 ? spec.x0() : levels[k - 2];
        double lo_off = cfg.bracket_lo;
        double hi_off = cfg.bracket_hi;
        double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
        while (true) {
            lo = std::clamp(guess + lo_off, cfg.max_bracket_lo, cfg.max_bracket_hi);
            hi = std::clamp(guess + hi_off, cfg.max_bracket_lo, cfg.max_bracket_hi);
            if (!(lo < hi)) {
                lo = cfg.max_bracket_lo;
                hi = cfg.max_bracket_hi;
            }
            flo = f(lo);
            fhi = f(hi);
            if ((flo < 0.0) != (fhi < 0.0) || flo == 0.0 || fhi == 0.0) break;
            if (lo <= cfg.max_bracket_lo && hi >= cfg.max_bracket_hi) {
                throw NoSolutionError(k, lo, hi, flo, fhi);
            }
            lo_off *= 2.0;
            hi_off *= 2.0;
        }

        Root root;
        if (flo == 0.0) {
            root = {lo, flo, 0};
        } else if (fhi == 0.0) {
            root = {hi, fhi, 0};
        } else {
            root = solve_bracketed(f, lo, flo, hi, fhi, cfg, k);
        }
        levels.back() = root.x;
        iterations.push_back(root.iterations);

        if (cfg.enforce_no_arbitrage) {
            const CalibratedCurve partial(spec, knots, levels);
            const auto v = verify_interval(partial, k);
            if (!v.admissible) throw InadmissibleError(k, v.t_star, v.reason);
        }
    }

    CalibratedCurve curve(spec, knots, levels);
    std::vector<InstrumentReport> reports;
    for (std::size_t k = 1; k <= instruments.size(); ++k) {
        const auto& ins = instruments[k - 1];
        InstrumentReport r;
        r.maturity = ins.maturity;
        r.quote = ins.quote;
        r.implied_level = levels[k - 1];
        r.implied_quote = ins.implied_quote(curve);
        r.repricing_error = relative_error(r.implied_quote, r.quote);
        r.residual = ins.residual(curve);
        r.iterations = iterations[k - 1];
        r.tag = ins.tag;
        reports.push_back(std::move(r));
    }
    auto verdict = verify_no_arbitrage(curve);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return CalibrationResult{std::move(curve), std::move(reports), std::move(verdict), elapsed};
}

CalibrationResult bootstrap_ois(const QuoteSet& quotes, const ModelSpec& spec,
                                const BootstrapConfig& config,
                                const std::vector<std::pair<double, double>>& anchors) {
    std::vector<Instrument> extra;
    for (const auto& [t, v] : anchors) {
        if (t >= quotes.maturity(quotes.size())) {
            throw InputError("anchors must lie before the last maturity");
        }
        extra.push_back(anchor_instrument(t, v));
    }
    return bootstrap(merge_instruments(ois_instruments(quotes), std::move(extra)), spec, config);
}

CalibrationResult bootstrap_cds(const QuoteSet& quotes, const DiscountCurveFn& discount,
                                const ModelSpec& spec, const BootstrapConfig& config,
                                std::size_t panels_per_period) {
    const CdsMarketFit fit(quotes, discount, panels_per_period);
    return bootstrap(cds_instruments(fit), spec, config);
}

double SampledCurve::value_at(double t) const {
    if (times.empty() || t < times.front() - kTimeSnap || t > times.back() + kTimeSnap) {
        throw DomainError("sampled curve evaluated outside its grid");
    }
    const auto it = std::lower_bound(times.begin(), times.end(), t - kTimeSnap);
    const auto k = static_cast<std::size_t>(it - times.begin());
    if (std::abs(times[k] - t) <= kTimeSnap || k == 0) return values[k];
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
}

std::vector<double> sample_grid(double horizon, double step, const std::vector<double>& extra) {
    if (!(horizon > 0.0) || !(step > 0.0)) throw InputError("sample grid needs positive horizon and step");
    std::vector<double> times;
    const auto count = static_cast<std::size_t>(std::floor(horizon / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) times.push_back(std::min(horizon, k * step));
    times.push_back(horizon);
    for (double t : extra) {
        if (t >= 0.0 && t <= horizon) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    std::vector<double> unique;
    for (double t : times) {
        if (unique.empty() || t - unique.back() > kTimeSnap) unique.push_back(t);
    }
    return unique;
}

SampledCurve sample_curve(const CalibratedCurve& curve, const std::vector<double>& times) {
    SampledCurve out;
    out.times = times;
    out.values.reserve(times.size());
    for (double t : times) out.values.push_back(curve.value(t));
    return out;
}

SampledCurve convex_mix(const SampledCurve& first, const SampledCurve& second, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("mixing weight must lie in [0, 1]");
    if (first.times.size() != second.times.size()) throw InputError("sample grids differ");
    SampledCurve out;
    out.times = first.times;
    for (std::size_t k = 0; k < first.times.size(); ++k) {
        if (std::abs(first.times[k] - second.times[k]) > kTimeSnap) {
            throw InputError("sample grids differ");
        }
        out.values.push_back(alpha * first.values[k] + (1.0 - alpha) * second.values[k]);
    }
    return out;
}

SampledCurve convex_mix(const CalibratedCurve& first, const CalibratedCurve& second, double alpha,
                        const std::vector<double>& times) {
    const auto& k1 = first.knots();
    const auto& k2 = second.knots();
    if (k1.size() != k2.size()) throw InputError("curves were calibrated to different quotes");
    for (std::size_t k = 0; k < k1.size(); ++k) {
        if (std::abs(k1[k] - k2[k]) > kTimeSnap) {
            throw InputError("curves were calibrated to different quotes");
        }
    }
    return convex_mix(sample_curve(first, times), sample_curve(second, times), alpha);
}

std::vector<double> implied_ois_rates(const QuoteSet& quotes,
                                      const std::function<double(double)>& curve) {
    const auto& sched = quotes.schedule();
    std::vector<double> rates;
    for (std::size_t i = 1; i <= quotes.size(); ++i) {
        const std::size_t p = sched.position(i);
        rates.push_back((1.0 - curve(sched.date(p))) / annuity(sched, p, curve));
    }
    return rates;
}

bool is_nonincreasing(const SampledCurve& curve, double slack) {
    for (std::size_t k = 1; k < curve.values.size(); ++k) {
        if (curve.values[k] > curve.values[k - 1] + slack) return false;
    }
    return true;
}

}  // namespace admcurve
