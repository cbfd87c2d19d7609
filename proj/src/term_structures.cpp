#include "admcurve/term_structures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "admcurve/errors.hpp"

namespace admcurve {

namespace {

constexpr double kGridSnap = 1e-9;

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

void require_increasing(std::span<const Tenor> maturities) {
    require(!maturities.empty(), "at least one maturity is required");
    require(maturities.front().years() > 0.0, "maturities must be positive");
    for (std::size_t i = 1; i < maturities.size(); ++i) {
        require(maturities[i - 1] < maturities[i], "maturities must be strictly increasing");
    }
}

}  // namespace

Tenor::Tenor(double years) : years_(years) {
    if (!std::isfinite(years) || years < 0.0) {
        std::ostringstream os;
        os << "tenor must be a finite non-negative year fraction, got " << years;
        throw InputError(os.str());
    }
}

std::vector<Tenor> to_tenors(std::span<const double> years) {
    std::vector<Tenor> out;
    out.reserve(years.size());
    for (double y : years) out.emplace_back(y);
    return out;
}

PaymentSchedule::PaymentSchedule(std::vector<double> dates, std::vector<double> accruals,
                                 std::vector<std::size_t> standard_positions)
    : dates_(std::move(dates)),
      accruals_(std::move(accruals)),
      positions_(std::move(standard_positions)) {
    require(!dates_.empty(), "payment schedule is empty");
    require(dates_.size() == accruals_.size(), "one accrual per payment date is required");
    require(dates_.front() > 0.0, "first payment date must be positive");
    for (std::size_t k = 1; k < dates_.size(); ++k) {
        require(dates_[k - 1] < dates_[k], "payment dates must be strictly increasing");
    }
    for (double d : accruals_) require(std::isfinite(d) && d > 0.0, "accruals must be positive");
    require(!positions_.empty(), "at least one standard maturity is required");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        require(positions_[i] >= 1 && positions_[i] <= dates_.size(),
                "standard position outside the payment grid");
        if (i > 0) {
            require(positions_[i - 1] < positions_[i],
                    "standard positions must be strictly increasing");
        }
    }
    require(positions_.back() == dates_.size(),
            "last standard maturity must be the last payment date");
}

PaymentSchedule PaymentSchedule::from_dates(std::vector<double> dates,
                                            std::span<const Tenor> maturities) {
    require_increasing(maturities);
    std::vector<double> accruals(dates.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < dates.size(); ++k) {
        accruals[k] = dates[k] - prev;
        prev = dates[k];
    }
    std::vector<std::size_t> positions;
    positions.reserve(maturities.size());
    for (const Tenor& m : maturities) {
        const auto it = std::find_if(dates.begin(), dates.end(), [&](double d) {
            return std::abs(d - m.years()) <= kGridSnap;
        });
        if (it == dates.end()) {
            std::ostringstream os;
            os << "maturity " << m.years() << " is not a payment date";
            throw InputError(os.str());
        }
        *it = m.years();
        positions.push_back(static_cast<std::size_t>(it - dates.begin()) + 1);
    }
    return PaymentSchedule(std::move(dates), std::move(accruals), std::move(positions));
}

PaymentSchedule build_ois_schedule(std::span<const Tenor> maturities) {
    require_increasing(maturities);
    std::vector<std::size_t> positions;
    for (const Tenor& m : maturities) {
        const double rounded = std::round(m.years());
        if (std::abs(m.years() - rounded) > kGridSnap || rounded < 1.0) {
            std::ostringstream os;
            os << "OIS maturity " << m.years()
               << " is not a whole number of years; supply an explicit schedule";
            throw InputError(os.str());
        }
        positions.push_back(static_cast<std::size_t>(rounded));
    }
    const std::size_t m = positions.back();
    std::vector<double> dates(m);
    for (std::size_t k = 0; k < m; ++k) dates[k] = static_cast<double>(k + 1);
    return PaymentSchedule(std::move(dates), std::vector<double>(m, 1.0), std::move(positions));
}

PaymentSchedule build_cds_schedule(std::span<const Tenor> maturities, int frequency) {
    require(frequency >= 1, "payment frequency must be a positive integer");
    require_increasing(maturities);
    const double f = static_cast<double>(frequency);
    std::vector<std::size_t> positions;
    for (const Tenor& m : maturities) {
        const double periods = m.years() * f;
        const double rounded = std::round(periods);
        if (std::abs(periods - rounded) > kGridSnap * f || rounded < 1.0) {
            std::ostringstream os;
            os << "maturity " << m.years() << " is not a multiple of 1/" << frequency;
            throw InputError(os.str());
        }
        positions.push_back(static_cast<std::size_t>(rounded));
    }
    const std::size_t count = positions.back();
    std::vector<double> dates(count);
    for (std::size_t k = 0; k < count; ++k) dates[k] = static_cast<double>(k + 1) / f;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        dates[positions[i] - 1] = maturities[i].years();
    }
    return PaymentSchedule(std::move(dates), std::vector<double>(count, 1.0 / f),
                           std::move(positions));
}

std::string to_string(QuoteKind kind) { return kind == QuoteKind::OIS ? "OIS" : "CDS"; }

QuoteSet::QuoteSet(QuoteKind kind, std::vector<Tenor> maturities, std::vector<double> rates,
                   PaymentSchedule schedule, std::optional<double> recovery)
    : kind_(kind),
      maturities_(std::move(maturities)),
      rates_(std::move(rates)),
      schedule_(std::move(schedule)),
      recovery_(recovery) {
    require_increasing(maturities_);
    require(rates_.size() == maturities_.size(), "one quote per maturity is required");
    for (double r : rates_) require(std::isfinite(r) && r >= 0.0, "quotes must be non-negative");
    require(schedule_.maturity_count() == maturities_.size(),
            "schedule and quotes disagree on the number of maturities");
    for (std::size_t i = 1; i <= size(); ++i) {
        if (schedule_.date(schedule_.position(i)) != maturity(i)) {
            std::ostringstream os;
            os << "maturity " << maturity(i) << " is not aligned with its schedule position";
            throw InputError(os.str());
        }
    }
    if (kind_ == QuoteKind::CDS) {
        require(recovery_.has_value(), "CDS quotes need a recovery rate");
        require(*recovery_ >= 0.0 && *recovery_ < 1.0, "recovery must lie in [0, 1)");
    }
    i0_ = size() + 1;
    for (std::size_t i = 1; i <= size(); ++i) {
        if (schedule_.position(i) != i) {
            i0_ = i;
            break;
        }
    }
}

QuoteSet QuoteSet::ois(std::vector<Tenor> maturities, std::vector<double> rates) {
    auto schedule = build_ois_schedule(maturities);
    return ois(std::move(maturities), std::move(rates), std::move(schedule));
}

QuoteSet QuoteSet::ois(std::vector<Tenor> maturities, std::vector<double> rates,
                       PaymentSchedule schedule) {
    return QuoteSet(QuoteKind::OIS, std::move(maturities), std::move(rates), std::move(schedule),
                    std::nullopt);
}

QuoteSet QuoteSet::cds(std::vector<Tenor> maturities, std::vector<double> spreads,
                       double recovery, PaymentSchedule schedule) {
    return QuoteSet(QuoteKind::CDS, std::move(maturities), std::move(spreads),
                    std::move(schedule), recovery);
}

QuoteSet QuoteSet::cds(std::vector<Tenor> maturities, std::vector<double> spreads,
                       double recovery, int frequency) {
    auto schedule = build_cds_schedule(maturities, frequency);
    return cds(std::move(maturities), std::move(spreads), recovery, std::move(schedule));
}

QuoteSet QuoteSet::with_rate(std::size_t i, double rate) const {
    auto rates = rates_;
    rates.at(i - 1) = rate;
    return QuoteSet(kind_, maturities_, std::move(rates), schedule_, recovery_);
}

DiscountCurveFn::DiscountCurveFn(std::function<double(double)> discount,
                                 std::function<double(double)> forward, std::string label)
    : discount_(std::move(discount)), forward_(std::move(forward)), label_(std::move(label)) {
    require(static_cast<bool>(discount_) && static_cast<bool>(forward_),
            "discount curve needs both a discount and a forward function");
}

DiscountCurveFn DiscountCurveFn::flat(double rate) {
    require(std::isfinite(rate), "flat rate must be finite");
    std::ostringstream label;
    label << "flat(" << rate << ")";
    return DiscountCurveFn([rate](double t) { return std::exp(-rate * t); },
                           [rate](double) { return rate; }, label.str());
}

bool is_valid_discount_curve(const DiscountCurveFn& curve, double horizon, double step) {
    if (std::abs(curve.discount(0.0) - 1.0) > 1e-12) return false;
    double prev = 1.0;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = std::min(horizon, static_cast<double>(k) * step);
        const double v = curve.discount(t);
        if (!(v <= prev + 1e-15) || !(v > 0.0)) return false;
        prev = v;
    }
    return true;
}

}  // namespace admcurve
