#include "admcurve/levy.hpp"

#include <cmath>
#include <sstream>

#include "admcurve/errors.hpp"
#include "admcurve/quadrature.hpp"

namespace admcurve {

namespace {

double checked_lambda(double lambda, const char* family) {
    if (!std::isfinite(lambda) || !(lambda > 0.0)) {
        std::ostringstream os;
        os << family << " driver needs lambda > 0, got " << lambda;
        throw InputError(os.str());
    }
    return lambda;
}

[[noreturn]] void out_of_domain(const LevyDriver& d, double theta) {
    std::ostringstream os;
    os << "cumulant of " << d.name() << " undefined at theta = " << theta;
    throw DomainError(os.str());
}

}  // namespace

LevyDriver LevyDriver::brownian() { return {LevyFamily::BrownianMotion, 0.0}; }

LevyDriver LevyDriver::gamma(double lambda) {
    return {LevyFamily::Gamma, checked_lambda(lambda, "Gamma")};
}

LevyDriver LevyDriver::inverse_gaussian(double lambda) {
    return {LevyFamily::InverseGaussian, checked_lambda(lambda, "inverse Gaussian")};
}

std::string LevyDriver::name() const {
    std::ostringstream os;
    switch (family_) {
        case LevyFamily::BrownianMotion:
            return "brownian";
        case LevyFamily::Gamma:
            os << "gamma(" << lambda_ << ")";
            break;
        case LevyFamily::InverseGaussian:
            os << "inverse_gaussian(" << lambda_ << ")";
            break;
    }
    return os.str();
}

double cumulant(const LevyDriver& d, double theta) {
    switch (d.family()) {
        case LevyFamily::BrownianMotion:
            return 0.5 * theta * theta;
        case LevyFamily::Gamma:
            if (!(theta < d.lambda())) out_of_domain(d, theta);
            return -std::log1p(-theta / d.lambda());
        case LevyFamily::InverseGaussian: {
            const double disc = d.lambda() * d.lambda() - 2.0 * theta;
            if (!(disc > 0.0)) out_of_domain(d, theta);
            return d.lambda() - std::sqrt(disc);
        }
    }
    out_of_domain(d, theta);
}

double cumulant_deriv(const LevyDriver& d, double theta) {
    switch (d.family()) {
        case LevyFamily::BrownianMotion:
            return theta;
        case LevyFamily::Gamma:
            if (!(theta < d.lambda())) out_of_domain(d, theta);
            return 1.0 / (d.lambda() - theta);
        case LevyFamily::InverseGaussian: {
            const double disc = d.lambda() * d.lambda() - 2.0 * theta;
            if (!(disc > 0.0)) out_of_domain(d, theta);
            return 1.0 / std::sqrt(disc);
        }
    }
    out_of_domain(d, theta);
}

double ou_phi(double a, double s) { return -std::expm1(-a * s) / a; }

double ou_xi(double a, double s) { return s - ou_phi(a, s); }

double psi(const LevyDriver& driver, double a, double sigma, double s, double abs_tol) {
    if (s == 0.0) return 0.0;
    const auto integrand = [&](double u) { return cumulant(driver, -sigma * ou_phi(a, u)); };
    return -integrate_adaptive(integrand, 0.0, s, abs_tol).value;
}

double psi_brownian(double a, double sigma, double s) {
    const double phi = ou_phi(a, s);
    const double tail = -std::expm1(-2.0 * a * s) / (2.0 * a);
    return -(sigma * sigma) / (2.0 * a * a) * (s - 2.0 * phi + tail);
}

}  // namespace admcurve
