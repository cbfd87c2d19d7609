#include "admcurve/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "admcurve/errors.hpp"

namespace admcurve {

double gauss_legendre_composite(const std::function<double(double)>& f, double lo, double hi,
                                std::size_t panels) {
    if (panels == 0) panels = 1;
    const double width = (hi - lo) / static_cast<double>(panels);
    const double half = 0.5 * width;
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = lo + (static_cast<double>(p) + 0.5) * width;
        double panel = 0.0;
        for (std::size_t j = 0; j < GaussLegendre8::nodes.size(); ++j) {
            panel += GaussLegendre8::weights[j] * f(mid + half * GaussLegendre8::nodes[j]);
        }
        total += half * panel;
    }
    return total;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, std::size_t max_panels) {
    if (hi == lo) return {0.0, 0.0, 0};
    std::size_t panels = 1;
    double previous = gauss_legendre_composite(f, lo, hi, panels);
    double diff = 0.0;
    while (panels < max_panels) {
        panels *= 2;
        const double current = gauss_legendre_composite(f, lo, hi, panels);
        diff = std::abs(current - previous);
        if (diff < abs_tol) return {current, diff, panels};
        previous = current;
    }
    std::ostringstream os;
    os << "quadrature on [" << lo << ", " << hi << "] did not reach " << abs_tol << " with "
       << panels << " panels (achieved " << diff << ")";
    throw QuadratureError(os.str(), diff);
}

}  // namespace admcurve
