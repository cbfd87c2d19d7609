#include "admcurve/errors.hpp"

#include <sstream>

namespace admcurve {

namespace {

std::string no_solution_message(std::size_t instrument, double lo, double hi, double rlo,
                                double rhi) {
    std::ostringstream os;
    os << "no level solves instrument " << instrument << ": residual keeps its sign on [" << lo
       << ", " << hi << "] (residuals " << rlo << ", " << rhi << ")";
    return os.str();
}

std::string inadmissible_message(std::size_t instrument, std::optional<double> t_star,
                                 const std::string& reason) {
    std::ostringstream os;
    os << "curve inadmissible on interval " << instrument;
    if (t_star) os << " at t = " << *t_star;
    if (!reason.empty()) os << ": " << reason;
    return os.str();
}

}  // namespace

NoSolutionError::NoSolutionError(std::size_t instrument, double lo, double hi, double residual_lo,
                                 double residual_hi)
    : CalibrationError(instrument,
                       no_solution_message(instrument, lo, hi, residual_lo, residual_hi)),
      lo_(lo),
      hi_(hi),
      res_lo_(residual_lo),
      res_hi_(residual_hi) {}

InadmissibleError::InadmissibleError(std::size_t instrument, std::optional<double> t_star,
                                     const std::string& reason)
    : CalibrationError(instrument, inadmissible_message(instrument, t_star, reason)),
      t_star_(t_star) {}

}  // namespace admcurve
