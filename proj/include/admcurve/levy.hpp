#pragma once

#include <string>

namespace admcurve {

enum class LevyFamily { BrownianMotion, Gamma, InverseGaussian };

/// Driving Levy process of the OU short-rate model, identified by its
/// cumulant kappa(theta) = log E[exp(theta Y_1)].
///
///   Brownian motion     kappa = theta^2 / 2
///   Gamma(lambda)       kappa = -log(1 - theta / lambda)
///   Inverse Gaussian    kappa = lambda - sqrt(lambda^2 - 2 theta)
///
/// lambda is the inverse of the mean jump size for the two subordinators.
class LevyDriver {
public:
    static LevyDriver brownian();
    static LevyDriver gamma(double lambda);
    static LevyDriver inverse_gaussian(double lambda);

    LevyFamily family() const noexcept { return family_; }
    /// Jump-scale parameter; 0 for Brownian motion.
    double lambda() const noexcept { return lambda_; }
    bool is_subordinator() const noexcept { return family_ != LevyFamily::BrownianMotion; }

    std::string name() const;

private:
    LevyDriver(LevyFamily family, double lambda) : family_(family), lambda_(lambda) {}

    LevyFamily family_;
    double lambda_;
};

/// kappa(theta). Throws DomainError outside the family's domain
/// (Gamma: theta < lambda, inverse Gaussian: theta < lambda^2 / 2).
double cumulant(const LevyDriver& driver, double theta);

/// kappa'(theta), same domain as cumulant.
double cumulant_deriv(const LevyDriver& driver, double theta);

/// (1 - exp(-a s)) / a
double ou_phi(double a, double s);

/// s - ou_phi(a, s), the integrated mean-reversion kernel.
double ou_xi(double a, double s);

/// psi(s) = -int_0^s kappa(-sigma phi(u)) du by adaptive composite
/// Gauss-Legendre to `abs_tol`. Throws QuadratureError on non-convergence.
double psi(const LevyDriver& driver, double a, double sigma, double s, double abs_tol = 1e-10);

/// Closed form of psi for the Brownian driver:
/// -(sigma^2 / 2a^2) (s - 2 phi(s) + (1 - exp(-2 a s)) / 2a).
double psi_brownian(double a, double sigma, double s);

}  // namespace admcurve
