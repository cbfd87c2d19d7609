#include <cmath>

#include "admcurve/bounds.hpp"
#include "admcurve/calibration.hpp"
#include "admcurve/errors.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace admcurve;

namespace {

ModelSpec gamma_spec(double c) {
    return ModelSpec::levy_ou(LevyDriver::gamma(200.0), c, 0.00063, 0.01, 1.0);
}

std::function<double(double)> as_fn(const CalibratedCurve& c) {
    return [&c](double t) { return c.value(t); };
}

}  // namespace

TEST_CASE("single-instrument OIS system") {
    const auto q = QuoteSet::ois(to_tenors(std::vector<double>{1}), {0.01});
    const auto s = assemble_ois_system(q);
    CHECK(s.rows == 1);
    CHECK(s.cols == 1);
    CHECK(s.A == std::vector<double>{1.01});
    CHECK(s.B == std::vector<double>{1.0});
}

TEST_CASE("OIS system structure for the 2013 quotes") {
    const auto q = fixtures::ois_2013();
    const auto s = assemble_ois_system(q);
    CHECK(s.rows == 14);
    CHECK(s.cols == 40);
    CHECK(s.last_nonzero(10) == 14);
    for (std::size_t i = 0; i < s.rows; ++i) {
        CHECK(s.last_nonzero(i) == q.schedule().position(i + 1) - 1);
    }
    CHECK(s.tags[10] == "OIS 15y");
}

TEST_CASE("forward substitution of the first ten rows gives the exact prefix") {
    const auto q = fixtures::ois_2013();
    const auto s = assemble_ois_system(q);
    const auto exact = ois_exact_prefix(q);
    std::vector<double> p(10);
    for (std::size_t i = 0; i < 10; ++i) {
        double r = s.B[i];
        for (std::size_t k = 0; k < i; ++k) r -= s.at(i, k) * p[k];
        p[i] = r / s.at(i, i);
        CHECK(std::abs(p[i] - exact[i]) < 1e-12);
    }
}

TEST_CASE("CDS system coefficients") {
    const auto q = fixtures::aig_2007();
    const auto d = fixtures::flat3();
    const auto s = assemble_cds_system(q, d);
    CHECK(s.rows == 4);
    CHECK(s.cols == 40);
    CHECK(s.B[0] == doctest::Approx(0.6));
    CHECK(s.at(0, 0) == doctest::Approx(0.0058 * 0.25 * std::exp(-0.0075)).epsilon(1e-14));
    CHECK(s.at(0, 11) ==
          doctest::Approx(0.0058 * 0.25 * std::exp(-0.09) + 0.6 * std::exp(-0.09)).epsilon(1e-14));
    CHECK(s.last_nonzero(0) == 11);
}

TEST_CASE("zero-default identity: residual at full survival is the spread times the annuity") {
    const auto q = fixtures::aig_2007();
    const CdsMarketFit fit(q, fixtures::flat3());
    const auto one = [](double) { return 1.0; };
    for (std::size_t i = 1; i <= 4; ++i) {
        double annuity = 0.0;
        for (std::size_t k = 1; k <= q.schedule().position(i); ++k) annuity += 0.25 * std::exp(-0.03 * 0.25 * k);
        CHECK(std::abs(fit.residual(i, one) - q.rate(i) * annuity) < 1e-14);
        CHECK(std::abs(fit.protection_integral(i, one) - (1.0 - std::exp(-0.03 * q.maturity(i)))) < 1e-14);
    }
}

TEST_CASE("recovery close to one") {
    const auto q = fixtures::aig_2007(0.999999);
    const CdsMarketFit fit(q, fixtures::flat3());
    const auto one = [](double) { return 1.0; };
    CHECK(fit.system().B[0] == doctest::Approx(1e-6).epsilon(1e-6));
    CHECK(fit.residual(1, one) == doctest::Approx(q.rate(1) * fit.risky_annuity(1, one)));
}

TEST_CASE("Lévy-OU bootstrap on the 2013 quotes") {
    const auto q = fixtures::ois_2013();
    const auto bounds = ois_model_free_bounds(q);
    const auto r = bootstrap_ois(q, gamma_spec(10.0));
    CHECK(r.curve.levels().size() == 14);
    CHECK(r.max_repricing_error() < 1e-8);
    CHECK(r.verdict.admissible);
    for (std::size_t i = 11; i <= 14; ++i) {
        const double v = r.curve.value(q.maturity(i));
        CHECK(v >= bounds.lower(i) - 1e-9);
        CHECK(v <= bounds.upper(i) + 1e-9);
    }
    for (const auto& ins : r.instruments) CHECK(std::abs(ins.residual) <= 1e-12);
}

TEST_CASE("CIR bootstrap on the AIG quotes") {
    const auto q = fixtures::aig_2007();
    const auto bounds = cds_model_free_bounds(q, fixtures::flat3());
    const auto r = bootstrap_cds(q, fixtures::flat3(), ModelSpec::extended_cir(0.0097, 1.0, 1.0));
    REQUIRE(r.curve.levels().size() == 4);
    for (double b : r.curve.levels()) CHECK(b > 0.0);
    CHECK(r.max_repricing_error() < 1e-8);
    for (double t = 0.0; t <= 10.0; t += 0.25) {
        const auto [lo, hi] = rectangle_envelope(bounds, t);
        const double v = r.curve.value(t);
        CHECK(v >= lo - 5e-4);
        CHECK(v <= hi + 5e-4);
    }
}

TEST_CASE("one OIS instrument is fitted exactly by either model") {
    const auto q = QuoteSet::ois(to_tenors(std::vector<double>{1}), {0.0123});
    const auto target = 1.0 / 1.0123;
    const auto levy = bootstrap_ois(q, gamma_spec(1.0));
    CHECK(std::abs(levy.curve.value(1.0) - target) < 1e-10);
    const auto cir = bootstrap_ois(q, ModelSpec::extended_cir(0.01, 1.0, 1.0));
    CHECK(std::abs(cir.curve.value(1.0) - target) < 1e-10);
}

TEST_CASE("bootstrap is deterministic and local") {
    const auto q = fixtures::ois_2013();
    const auto r1 = bootstrap_ois(q, gamma_spec(20.0));
    const auto r2 = bootstrap_ois(q, gamma_spec(20.0));
    CHECK(r1.curve.levels() == r2.curve.levels());
    const auto bumped = bootstrap_ois(q.with_rate(12, q.rate(12) * 1.01), gamma_spec(20.0));
    for (std::size_t k = 0; k < 11; ++k) CHECK(bumped.curve.levels()[k] == r1.curve.levels()[k]);
    CHECK(bumped.curve.levels()[11] != r1.curve.levels()[11]);
}

TEST_CASE("fitted present values do not depend on the model") {
    const auto q = fixtures::ois_2013();
    const auto a = bootstrap_ois(q, gamma_spec(1.0)).curve;
    const auto b = bootstrap_ois(q, ModelSpec::levy_ou(LevyDriver::brownian(), 1.0, 0.00063, 0.05, 0.002))
                       .curve;
    const auto sys = assemble_ois_system(q);
    std::vector<double> ga, gb;
    for (double t : sys.grid) {
        ga.push_back(a.value(t));
        gb.push_back(b.value(t));
    }
    const auto ra = sys.residuals(ga);
    const auto rb = sys.residuals(gb);
    for (std::size_t i = 0; i < ra.size(); ++i) CHECK(std::abs(ra[i] - rb[i]) < 2e-8);
}

TEST_CASE("quadrature refinement leaves calibrated CDS residuals unchanged") {
    const auto q = fixtures::aig_2007();
    const auto r = bootstrap_cds(q, fixtures::flat3(), ModelSpec::extended_cir(0.0097, 1.0, 1.0));
    const CdsMarketFit coarse(q, fixtures::flat3(), 1);
    const CdsMarketFit fine(q, fixtures::flat3(), 2);
    for (std::size_t i = 1; i <= 4; ++i) {
        CHECK(std::abs(coarse.residual(i, as_fn(r.curve)) - fine.residual(i, as_fn(r.curve))) < 1e-10);
    }
}

TEST_CASE("no solution inside the widest bracket") {
    const auto q = QuoteSet::ois(to_tenors(std::vector<double>{1, 2}), {10.0, 10.0});
    try {
        bootstrap_ois(q, gamma_spec(1.0));
        FAIL("expected NoSolutionError");
    } catch (const NoSolutionError& e) {
        CHECK(e.instrument() == 1);
        CHECK(e.bracket_lo() == -50.0);
        CHECK(e.bracket_hi() == 50.0);
        CHECK((e.residual_lo() < 0.0) == (e.residual_hi() < 0.0));
    }
}

TEST_CASE("anchors") {
    const auto q = fixtures::ois_2013();
    const auto b = ois_model_free_bounds(q);
    const double v = 0.5 * (b.lower(10) + b.lower(11));
    const auto r = bootstrap_ois(q, gamma_spec(10.0), {}, {{12.5, v}});
    CHECK(r.curve.knots().size() == 15);
    CHECK(std::abs(r.curve.value(12.5) - v) < 1e-12);
    CHECK(r.max_repricing_error() < 1e-8);
    CHECK(r.instruments[10].tag == "anchor 12.5y");

    // An anchor above the 10y discount factor needs a negative forward.
    try {
        bootstrap_ois(q, gamma_spec(10.0), {}, {{10.5, b.upper(10) * 1.0002}});
        FAIL("expected InadmissibleError");
    } catch (const InadmissibleError& e) {
        CHECK(e.instrument() == 11);
        REQUIRE(e.t_star());
        CHECK(*e.t_star() > 10.0);
        CHECK(*e.t_star() <= 10.5);
    }
    BootstrapConfig lax;
    lax.enforce_no_arbitrage = false;
    const auto loose = bootstrap_ois(q, gamma_spec(10.0), lax, {{10.5, b.upper(10) * 1.0002}});
    CHECK_FALSE(loose.verdict.admissible);

    CHECK_THROWS_AS(bootstrap_ois(q, gamma_spec(10.0), {}, {{15.0, 0.74}}), InputError);
    CHECK_THROWS_AS(bootstrap_ois(q, gamma_spec(10.0), {}, {{50.0, 0.3}}), InputError);
    CHECK_THROWS_AS(anchor_instrument(1.0, 1.5), InputError);
}

TEST_CASE("sample grid") {
    const auto g = sample_grid(1.0, 0.3, {0.45, 2.0});
    const std::vector<double> expected{0.0, 0.3, 0.45, 0.6, 0.9, 1.0};
    REQUIRE(g.size() == expected.size());
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k] == doctest::Approx(expected[k]).epsilon(1e-15));
    CHECK(sample_grid(40.0, 0.05).size() == 801);
    CHECK_THROWS_AS(sample_grid(1.0, 0.0), InputError);
}

TEST_CASE("convex mixes") {
    const auto q = fixtures::ois_2013();
    const auto c1 = bootstrap_ois(q, gamma_spec(1.0)).curve;
    const auto c100 = bootstrap_ois(q, gamma_spec(100.0)).curve;
    const auto times = sample_grid(40.0, 0.25, q.schedule().dates());

    const auto zero = convex_mix(c1, c100, 0.0, times);
    const auto second = sample_curve(c100, times);
    CHECK(zero.values == second.values);

    const auto half = convex_mix(c1, c100, 0.5, times);
    CHECK(is_nonincreasing(half));
    const auto implied = implied_ois_rates(q, [&](double t) { return half.value_at(t); });
    for (std::size_t i = 1; i <= q.size(); ++i) {
        CHECK(std::abs(implied[i - 1] - q.rate(i)) / q.rate(i) < 1e-8);
    }

    const auto short_curve = bootstrap_ois(QuoteSet::ois(to_tenors(std::vector<double>{1}), {0.001}),
                                           gamma_spec(1.0))
                                 .curve;
    CHECK_THROWS_AS(convex_mix(c1, short_curve, 0.5, {0.0, 0.5}), InputError);
    CHECK_THROWS_AS(convex_mix(zero, second, 1.5), InputError);
}

TEST_CASE("sampled curve interpolation") {
    const SampledCurve s{{0.0, 1.0, 2.0}, {1.0, 0.9, 0.7}};
    CHECK(s.value_at(1.0) == 0.9);
    CHECK(s.value_at(1.5) == doctest::Approx(0.8));
    CHECK(s.value_at(0.0) == 1.0);
    CHECK_THROWS_AS(s.value_at(2.5), DomainError);
}

TEST_CASE("bootstrap input validation") {
    CHECK_THROWS_AS(bootstrap({}, gamma_spec(1.0)), InputError);
    auto ins = ois_instruments(fixtures::ois_2013());
    std::swap(ins[0], ins[1]);
    CHECK_THROWS_AS(bootstrap(ins, gamma_spec(1.0)), InputError);
    BootstrapConfig bad;
    bad.residual_tolerance = 0.0;
    CHECK_THROWS_AS(bootstrap(ois_instruments(fixtures::ois_2013()), gamma_spec(1.0), bad), InputError);
}
