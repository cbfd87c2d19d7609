#pragma once

#include <string_view>

namespace admcurve {

/// Numerical tolerances shared by the bound recursions and the verdict code.
struct Tolerances {
    double equality = 1e-12;         // values compared for equality
    double arbitrage_slack = 1e-14;  // lower bound may exceed upper bound by this much
};

/// Process-wide table. The first call reads ADMCURVE_TOL_OVERRIDE, a
/// comma-separated list such as "equality=1e-10,arbitrage_slack=1e-13".
const Tolerances& tolerances();

/// Parses an override string on top of the defaults. Throws InputError on
/// unknown keys or unparsable values.
Tolerances parse_tolerance_override(std::string_view spec);

}  // namespace admcurve
