#include "admcurve/tolerances.hpp"

#include <cstdlib>
#include <string>

#include "admcurve/errors.hpp"

namespace admcurve {

namespace {

double parse_positive(std::string_view key, std::string_view text) {
    std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !(v > 0.0)) {
        throw InputError("tolerance override: bad value for '" + std::string(key) + "': " + s);
    }
    return v;
}

Tolerances load_from_env() {
    const char* env = std::getenv("ADMCURVE_TOL_OVERRIDE");
    if (env == nullptr || *env == '\0') return {};
    return parse_tolerance_override(env);
}

}  // namespace

Tolerances parse_tolerance_override(std::string_view spec) {
    Tolerances tol;
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const auto item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw InputError("tolerance override: expected key=value, got '" + std::string(item) +
                             "'");
        }
        const auto key = item.substr(0, eq);
        const auto value = item.substr(eq + 1);
        if (key == "equality") {
            tol.equality = parse_positive(key, value);
        } else if (key == "arbitrage_slack") {
            tol.arbitrage_slack = parse_positive(key, value);
        } else {
            throw InputError("tolerance override: unknown key '" + std::string(key) + "'");
        }
    }
    return tol;
}

const Tolerances& tolerances() {
    static const Tolerances table = load_from_env();
    return table;
}

}  // namespace admcurve
