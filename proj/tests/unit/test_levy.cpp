#include <cmath>

#include "admcurve/errors.hpp"
#include "admcurve/levy.hpp"
#include "doctest.h"

using namespace admcurve;

namespace {

const LevyDriver kDrivers[] = {LevyDriver::brownian(), LevyDriver::gamma(200.0),
                               LevyDriver::inverse_gaussian(50.0)};

}  // namespace

TEST_CASE("cumulant values") {
    for (const auto& d : kDrivers) CHECK(cumulant(d, 0.0) == 0.0);
    CHECK(cumulant(LevyDriver::brownian(), -1.0) == 0.5);
    CHECK(cumulant(LevyDriver::gamma(200.0), -1.0) ==
          doctest::Approx(-std::log(1.0 + 1.0 / 200.0)).epsilon(1e-15));
    CHECK(cumulant(LevyDriver::inverse_gaussian(2.0), -2.5) == doctest::Approx(2.0 - 3.0));
}

TEST_CASE("cumulant derivative values") {
    CHECK(cumulant_deriv(LevyDriver::brownian(), -2.0) == -2.0);
    CHECK(cumulant_deriv(LevyDriver::gamma(200.0), 0.0) == 0.005);
    CHECK(cumulant_deriv(LevyDriver::inverse_gaussian(2.0), -2.5) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("cumulant derivative matches central differences") {
    const double h = 1e-6;
    for (const auto& d : kDrivers) {
        for (double theta : {-5.0, -1.0, -0.01}) {
            const double fd = (cumulant(d, theta + h) - cumulant(d, theta - h)) / (2.0 * h);
            const double k = cumulant_deriv(d, theta);
            CHECK(std::abs(k - fd) < 1e-8 * std::max(1.0, std::abs(k)));
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(cumulant(LevyDriver::gamma(2.0), 2.0), DomainError);
    CHECK_THROWS_AS(cumulant_deriv(LevyDriver::gamma(2.0), 3.0), DomainError);
    CHECK_THROWS_AS(cumulant(LevyDriver::inverse_gaussian(2.0), 2.0), DomainError);
    CHECK_THROWS_AS(LevyDriver::gamma(0.0), InputError);
    CHECK_THROWS_AS(LevyDriver::inverse_gaussian(-1.0), InputError);
}

TEST_CASE("cumulant is convex with increasing derivative on the negative axis") {
    for (const auto& d : kDrivers) {
        double prev = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 100; ++k) {
            const double theta = -10.0 + 0.1 * k;
            const double kp = cumulant_deriv(d, theta);
            CHECK(kp > prev);
            prev = kp;
            const double t2 = theta + 0.37;
            const double mid = cumulant(d, 0.5 * (theta + t2));
            CHECK(mid <= 0.5 * (cumulant(d, theta) + cumulant(d, t2)) + 1e-15);
        }
    }
}

TEST_CASE("phi and xi") {
    CHECK(ou_phi(0.01, 0.0) == 0.0);
    CHECK(ou_xi(0.01, 0.0) == 0.0);
    CHECK(ou_phi(0.01, 10.0) == doctest::Approx((1.0 - std::exp(-0.1)) / 0.01).epsilon(1e-15));
    CHECK(std::abs(ou_phi(0.01, 100.0 / 0.01) - (1.0 - std::exp(-100.0)) / 0.01) < 1e-10);
    double prev = 0.0;
    for (double s = 0.5; s < 500.0; s *= 1.5) {
        CHECK(ou_phi(0.01, s) > prev);
        prev = ou_phi(0.01, s);
    }
}

TEST_CASE("psi at zero and against the Brownian closed form") {
    for (const auto& d : kDrivers) CHECK(psi(d, 0.01, 1.0, 0.0) == 0.0);
    for (double a : {0.01, 0.5, 2.0}) {
        for (double s : {0.25, 1.0, 5.0, 17.0, 40.0}) {
            const double q = psi(LevyDriver::brownian(), a, 0.02, s);
            CHECK(std::abs(q - psi_brownian(a, 0.02, s)) < 1e-9);
        }
    }
}

TEST_CASE("psi quadrature refinement") {
    const auto g = LevyDriver::gamma(200.0);
    const double coarse = psi(g, 0.01, 1.0, 5.0, 1e-10);
    const double fine = psi(g, 0.01, 1.0, 5.0, 1e-13);
    CHECK(std::abs(coarse - fine) < 1e-9);
}

TEST_CASE("psi sign and monotonicity") {
    const auto g = LevyDriver::gamma(200.0);
    const auto ig = LevyDriver::inverse_gaussian(50.0);
    double pg = 0.0;
    double pi = 0.0;
    for (double s = 0.5; s <= 40.0; s += 0.5) {
        const double vg = psi(g, 0.01, 1.0, s);
        const double vi = psi(ig, 0.01, 1.0, s);
        CHECK(vg >= pg);
        CHECK(vi >= pi);
        pg = vg;
        pi = vi;
        CHECK(psi(LevyDriver::brownian(), 0.01, 1.0, s) <= 0.0);
    }
}
