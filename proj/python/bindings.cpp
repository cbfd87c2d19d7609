#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "admcurve/bounds.hpp"
#include "admcurve/calibration.hpp"
#include "admcurve/errors.hpp"
#include "admcurve/levy.hpp"

namespace py = pybind11;
using namespace admcurve;

namespace {

std::vector<Tenor> tenors(const std::vector<double>& years) { return to_tenors(years); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Arbitrage-free OIS and CDS term structures";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InputError>(m, "InputError", base);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<QuadratureError>(m, "QuadratureError", base);
    py::register_exception<DegenerateQuoteError>(m, "DegenerateQuoteError", base);
    py::register_exception<PreconditionError>(m, "PreconditionError", base);
    py::register_exception<ArbitrageError>(m, "ArbitrageError", base);
    auto calib = py::register_exception<CalibrationError>(m, "CalibrationError", base);
    py::register_exception<NoSolutionError>(m, "NoSolutionError", calib);
    py::register_exception<InadmissibleError>(m, "InadmissibleError", calib);

    py::enum_<QuoteKind>(m, "QuoteKind").value("OIS", QuoteKind::OIS).value("CDS", QuoteKind::CDS);

    py::class_<QuoteSet>(m, "QuoteSet")
        .def_static(
            "ois",
            [](const std::vector<double>& maturities, std::vector<double> rates) {
                return QuoteSet::ois(tenors(maturities), std::move(rates));
            },
            py::arg("maturities"), py::arg("rates"))
        .def_static(
            "cds",
            [](const std::vector<double>& maturities, std::vector<double> spreads, double recovery,
               int frequency) {
                return QuoteSet::cds(tenors(maturities), std::move(spreads), recovery, frequency);
            },
            py::arg("maturities"), py::arg("spreads"), py::arg("recovery"), py::arg("frequency") = 4)
        .def_property_readonly("kind", &QuoteSet::kind)
        .def_property_readonly("rates", &QuoteSet::rates)
        .def_property_readonly("maturities",
                               [](const QuoteSet& q) {
                                   std::vector<double> out;
                                   for (const auto& t : q.maturities()) out.push_back(t.years());
                                   return out;
                               })
        .def("__len__", &QuoteSet::size)
        .def("with_rate", &QuoteSet::with_rate, py::arg("index"), py::arg("rate"));

    py::class_<DiscountCurveFn>(m, "DiscountCurve")
        .def(py::init<std::function<double(double)>, std::function<double(double)>, std::string>(),
             py::arg("discount"), py::arg("forward"), py::arg("label") = "custom")
        .def_static("flat", &DiscountCurveFn::flat, py::arg("rate"))
        .def("discount", &DiscountCurveFn::discount)
        .def("forward", &DiscountCurveFn::forward);

    py::class_<BoundEntry>(m, "BoundEntry")
        .def_readonly("maturity", &BoundEntry::maturity)
        .def_readonly("exact", &BoundEntry::exact)
        .def_readonly("lower", &BoundEntry::lower)
        .def_readonly("upper", &BoundEntry::upper);

    py::class_<Rectangle>(m, "Rectangle")
        .def_readonly("t_left", &Rectangle::t_left)
        .def_readonly("v_bottom", &Rectangle::v_bottom)
        .def_readonly("t_right", &Rectangle::t_right)
        .def_readonly("v_top", &Rectangle::v_top);

    py::class_<BoundsResult>(m, "BoundsResult")
        .def_readonly("kind", &BoundsResult::kind)
        .def_readonly("entries", &BoundsResult::entries)
        .def_readonly("rectangles", &BoundsResult::rectangles)
        .def_readonly("diagnostics", &BoundsResult::diagnostics)
        .def("lower", &BoundsResult::lower, py::arg("index"))
        .def("upper", &BoundsResult::upper, py::arg("index"))
        .def("envelope", [](const BoundsResult& b, double t) { return rectangle_envelope(b, t); });

    py::class_<ArbitrageReport>(m, "ArbitrageReport")
        .def_property_readonly("clean", &ArbitrageReport::clean)
        .def_readonly("index", &ArbitrageReport::index)
        .def_readonly("quote", &ArbitrageReport::quote)
        .def_readonly("threshold", &ArbitrageReport::threshold)
        .def_readonly("reason", &ArbitrageReport::reason);

    m.def("ois_exact_prefix", &ois_exact_prefix, py::arg("quotes"));
    m.def("ois_bounds", &ois_model_free_bounds, py::arg("quotes"));
    m.def("cds_bounds", &cds_model_free_bounds, py::arg("quotes"), py::arg("discount"));
    m.def("detect_arbitrage", &ois_detect_arbitrage, py::arg("quotes"));

    py::class_<LevyDriver>(m, "LevyDriver")
        .def_static("brownian", &LevyDriver::brownian)
        .def_static("gamma", &LevyDriver::gamma, py::arg("lam"))
        .def_static("inverse_gaussian", &LevyDriver::inverse_gaussian, py::arg("lam"));
    m.def("cumulant", &cumulant, py::arg("driver"), py::arg("theta"));

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_static("levy_ou", &ModelSpec::levy_ou, py::arg("driver"), py::arg("c"), py::arg("x0"),
                    py::arg("a"), py::arg("sigma"))
        .def_static("extended_cir", &ModelSpec::extended_cir, py::arg("x0"), py::arg("a"),
                    py::arg("sigma"))
        .def("__repr__", &ModelSpec::describe);

    py::class_<CalibratedCurve>(m, "CalibratedCurve")
        .def(py::init<ModelSpec, std::vector<double>, std::vector<double>>(), py::arg("spec"),
             py::arg("knots"), py::arg("levels"))
        .def_property_readonly("knots", &CalibratedCurve::knots)
        .def_property_readonly("levels", &CalibratedCurve::levels)
        .def("value", &CalibratedCurve::value, py::arg("t"))
        .def("forward", &CalibratedCurve::forward, py::arg("t"))
        .def("spot_rate", &CalibratedCurve::spot_rate, py::arg("t"));

    py::class_<Verdict>(m, "Verdict")
        .def_readonly("admissible", &Verdict::admissible)
        .def_readonly("interval", &Verdict::interval)
        .def_readonly("t_star", &Verdict::t_star)
        .def_readonly("reason", &Verdict::reason);

    py::class_<InstrumentReport>(m, "InstrumentReport")
        .def_readonly("maturity", &InstrumentReport::maturity)
        .def_readonly("quote", &InstrumentReport::quote)
        .def_readonly("implied_level", &InstrumentReport::implied_level)
        .def_readonly("implied_quote", &InstrumentReport::implied_quote)
        .def_readonly("repricing_error", &InstrumentReport::repricing_error)
        .def_readonly("tag", &InstrumentReport::tag);

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("curve", &CalibrationResult::curve)
        .def_readonly("instruments", &CalibrationResult::instruments)
        .def_readonly("verdict", &CalibrationResult::verdict)
        .def_property_readonly("max_repricing_error", &CalibrationResult::max_repricing_error);

    m.def(
        "bootstrap_ois",
        [](const QuoteSet& q, const ModelSpec& spec,
           const std::vector<std::pair<double, double>>& anchors) {
            py::gil_scoped_release release;
            return bootstrap_ois(q, spec, {}, anchors);
        },
        py::arg("quotes"), py::arg("spec"), py::arg("anchors") = std::vector<std::pair<double, double>>{});
    m.def(
        "bootstrap_cds",
        [](const QuoteSet& q, const DiscountCurveFn& disc, const ModelSpec& spec) {
            return bootstrap_cds(q, disc, spec);
        },
        py::arg("quotes"), py::arg("discount"), py::arg("spec"));
}
