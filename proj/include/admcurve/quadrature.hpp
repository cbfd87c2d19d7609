#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace admcurve {

/// 8-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre8 {
    static constexpr std::array<double, 8> nodes = {
        -0.9602898564975362316835609, -0.7966664774136267395915539,
        -0.5255324099163289858177390, -0.1834346424956498049394761,
        0.1834346424956498049394761,  0.5255324099163289858177390,
        0.7966664774136267395915539,  0.9602898564975362316835609};
    static constexpr std::array<double, 8> weights = {
        0.1012285362903762591525314, 0.2223810344533744705443560,
        0.3137066458778872873379622, 0.3626837833783619829651504,
        0.3626837833783619829651504, 0.3137066458778872873379622,
        0.2223810344533744705443560, 0.1012285362903762591525314};
};

/// Composite 8-point Gauss-Legendre over `panels` equal panels of [lo, hi].
double gauss_legendre_composite(const std::function<double(double)>& f, double lo, double hi,
                                std::size_t panels);

struct QuadratureResult {
    double value = 0.0;
    double difference = 0.0;  // |last - previous| refinement level
    std::size_t panels = 0;
};

/// Doubles the panel count until two successive levels agree to `abs_tol`.
/// Throws QuadratureError when `max_panels` is reached first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, std::size_t max_panels = std::size_t{1} << 14);

}  // namespace admcurve
