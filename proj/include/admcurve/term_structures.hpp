/**
 * @file term_structures.hpp
 * @brief Quotes, payment schedules and discount-curve handles.
 *
 * Time is a year fraction measured from the quotation date, which is 0.
 * Rates and spreads are plain decimals (0.072 % is stored as 0.00072).
 */

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace admcurve {

/// Non-negative year fraction from the quotation date.
class Tenor {
public:
    constexpr Tenor() = default;
    explicit Tenor(double years);

    constexpr double years() const noexcept { return years_; }
    constexpr auto operator<=>(const Tenor&) const = default;

private:
    double years_ = 0.0;
};

std::vector<Tenor> to_tenors(std::span<const double> years);

/// Payment grid t_1 < ... < t_m with accruals, plus the grid positions of
/// the quoted maturities.
///
/// `standard_positions()[i]` is the 1-based grid position p_{i+1} such that
/// t_{p_{i+1}} = T_{i+1}; the last position equals the grid size.
class PaymentSchedule {
public:
    PaymentSchedule(std::vector<double> dates, std::vector<double> accruals,
                    std::vector<std::size_t> standard_positions);

    /// Accruals default to t_k - t_{k-1}; positions are looked up from the
    /// maturities, which must lie on the grid.
    static PaymentSchedule from_dates(std::vector<double> dates, std::span<const Tenor> maturities);

    const std::vector<double>& dates() const noexcept { return dates_; }
    const std::vector<double>& accruals() const noexcept { return accruals_; }
    const std::vector<std::size_t>& standard_positions() const noexcept { return positions_; }

    std::size_t size() const noexcept { return dates_.size(); }
    std::size_t maturity_count() const noexcept { return positions_.size(); }

    /// t_k for 1-based k.
    double date(std::size_t k) const { return dates_.at(k - 1); }
    /// delta_k for 1-based k.
    double accrual(std::size_t k) const { return accruals_.at(k - 1); }
    /// p_i for 1-based i; p_0 = 0.
    std::size_t position(std::size_t i) const { return i == 0 ? 0 : positions_.at(i - 1); }

private:
    std::vector<double> dates_;
    std::vector<double> accruals_;
    std::vector<std::size_t> positions_;
};

/// Annual grid up to the last maturity with unit accruals. Every maturity
/// must be a whole number of years.
PaymentSchedule build_ois_schedule(std::span<const Tenor> maturities);

/// Uniform grid of step 1/frequency. Every maturity must be a multiple of the step.
PaymentSchedule build_cds_schedule(std::span<const Tenor> maturities, int frequency);

enum class QuoteKind { OIS, CDS };

std::string to_string(QuoteKind kind);

/// Par OIS rates or CDS fair spreads for strictly increasing maturities.
class QuoteSet {
public:
    static QuoteSet ois(std::vector<Tenor> maturities, std::vector<double> rates);
    static QuoteSet ois(std::vector<Tenor> maturities, std::vector<double> rates,
                        PaymentSchedule schedule);
    static QuoteSet cds(std::vector<Tenor> maturities, std::vector<double> spreads,
                        double recovery, PaymentSchedule schedule);
    static QuoteSet cds(std::vector<Tenor> maturities, std::vector<double> spreads,
                        double recovery, int frequency = 4);

    QuoteKind kind() const noexcept { return kind_; }
    const std::vector<Tenor>& maturities() const noexcept { return maturities_; }
    const std::vector<double>& rates() const noexcept { return rates_; }
    const PaymentSchedule& schedule() const noexcept { return schedule_; }
    std::optional<double> recovery() const noexcept { return recovery_; }
    std::size_t size() const noexcept { return rates_.size(); }

    /// T_i and S_i for 1-based i.
    double maturity(std::size_t i) const { return maturities_.at(i - 1).years(); }
    double rate(std::size_t i) const { return rates_.at(i - 1); }

    /// First 1-based index whose maturity is not the i-th grid date
    /// (size() + 1 when every maturity sits at its own index).
    std::size_t first_gap_index() const noexcept { return i0_; }

    /// Copy with one quote replaced (1-based index).
    QuoteSet with_rate(std::size_t i, double rate) const;

private:
    QuoteSet(QuoteKind kind, std::vector<Tenor> maturities, std::vector<double> rates,
             PaymentSchedule schedule, std::optional<double> recovery);

    QuoteKind kind_;
    std::vector<Tenor> maturities_;
    std::vector<double> rates_;
    PaymentSchedule schedule_;
    std::optional<double> recovery_;
    std::size_t i0_ = 0;
};

/// Handle on a discount curve t -> P^D(0, t) together with its
/// instantaneous forward f^D(0, t) = -d log P^D / dt.
class DiscountCurveFn {
public:
    DiscountCurveFn(std::function<double(double)> discount, std::function<double(double)> forward,
                    std::string label);

    static DiscountCurveFn flat(double rate);

    double discount(double t) const { return discount_(t); }
    double forward(double t) const { return forward_(t); }
    const std::string& label() const noexcept { return label_; }

private:
    std::function<double(double)> discount_;
    std::function<double(double)> forward_;
    std::string label_;
};

/// Checks P(0) = 1 and P nonincreasing on a grid of the given step up to `horizon`.
bool is_valid_discount_curve(const DiscountCurveFn& curve, double horizon, double step = 0.25);

}  // namespace admcurve
