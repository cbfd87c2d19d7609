// Shared market data and independent closed-form oracles for the tests.
#pragma once

#include <cmath>
#include <vector>

#include "admcurve/term_structures.hpp"

namespace fixtures {

inline const std::vector<double> kOisMaturities{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 40};
// Percent, as quoted.
inline const std::vector<double> kOisRatesPct{0.0720, 0.1530, 0.2870, 0.4540, 0.6390,
                                              0.8210, 0.9930, 1.1570, 1.3090, 1.4470,
                                              1.9300, 2.1160, 2.1820, 2.2090};

inline std::vector<double> ois_rates() {
    std::vector<double> r;
    for (double x : kOisRatesPct) r.push_back(x / 100.0);
    return r;
}

inline admcurve::QuoteSet ois_2013() {
    return admcurve::QuoteSet::ois(admcurve::to_tenors(kOisMaturities), ois_rates());
}

inline const std::vector<double> kCdsMaturities{3, 5, 7, 10};
inline const std::vector<double> kCdsSpreadsBp{58, 54, 52, 49};

inline admcurve::QuoteSet aig_2007(double recovery = 0.4) {
    std::vector<double> s;
    for (double x : kCdsSpreadsBp) s.push_back(x / 1e4);
    return admcurve::QuoteSet::cds(admcurve::to_tenors(kCdsMaturities), s, recovery, 4);
}

inline admcurve::DiscountCurveFn flat3() { return admcurve::DiscountCurveFn::flat(0.03); }

inline const std::vector<double> kCirX0{0.0001, 0.0025, 0.0049, 0.0073, 0.0097, 0.0121,
                                        0.0145, 0.0169, 0.0194, 0.0218, 0.0242};
inline const std::vector<double> kSweepC{1, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};

/// Dense forward substitution of the n x n OIS system on an annual grid
/// where every maturity is a grid date (no gaps).
inline std::vector<double> forward_substitution(const std::vector<double>& rates) {
    const std::size_t n = rates.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) a[i][k] = rates[i];
        a[i][i] = rates[i] + 1.0;
    }
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 1.0;
        for (std::size_t k = 0; k < i; ++k) s -= a[i][k] * p[k];
        p[i] = s / a[i][i];
    }
    return p;
}

/// Gaussian one-factor bond price with mean level b, speed a and
/// instantaneous variance sigma2.
inline double vasicek_bond(double x0, double a, double b, double sigma2, double t) {
    const double B = (1.0 - std::exp(-a * t)) / a;
    const double lnA = (B - t) * (a * a * b - sigma2 / 2.0) / (a * a) - sigma2 * B * B / (4.0 * a);
    return std::exp(lnA - B * x0);
}

/// Square-root diffusion bond price.
inline double cir_bond(double x0, double a, double b, double sigma, double t) {
    const double h = std::sqrt(a * a + 2.0 * sigma * sigma);
    const double e = std::exp(h * t) - 1.0;
    const double den = (h + a) * e + 2.0 * h;
    const double B = 2.0 * e / den;
    const double A = std::pow(2.0 * h * std::exp((a + h) * t / 2.0) / den, 2.0 * a * b / (sigma * sigma));
    return A * std::exp(-B * x0);
}

}  // namespace fixtures
