#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "admcurve/cli.hpp"
#include "admcurve/errors.hpp"
#include "admcurve/io.hpp"
#include "doctest.h"

using namespace admcurve;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "admcurve_unit" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kOis =
    "maturity_years,rate\n"
    "1,0.000720\n2,0.001530\n3,0.002870\n4,0.004540\n5,0.006390\n"
    "6,0.008210\n7,0.009930\n8,0.011570\n9,0.013090\n10,0.014470\n"
    "15,0.019300\n20,0.021160\n30,0.021820\n40,0.022090\n";

const char* kCds = "maturity_years,spread_bp\n3,58\n5,54\n7,52\n10,49\n";

cli::RunConfig config(cli::Command c, const fs::path& in, const fs::path& out) {
    cli::RunConfig cfg;
    cfg.command = c;
    cfg.input_path = in;
    cfg.output_dir = out;
    return cfg;
}

int run(const cli::RunConfig& cfg) {
    std::ostringstream out, err;
    return cli::run(cfg, out, err).exit_code;
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("csv reader") {
    const auto dir = scratch("csv");
    const auto p = write_file(dir, "a.csv", "# comment\r\nx, y\r\n\r\n1, 2\r\n3,4\r\n");
    const auto t = io::read_csv(p);
    CHECK(t.header == std::vector<std::string>{"x", "y"});
    CHECK(t.rows.size() == 2);
    CHECK(t.rows[1][0] == 3.0);
    CHECK(t.column("y") == 1);
    CHECK_THROWS_AS(t.column("z"), InputError);
    CHECK_THROWS_AS(io::read_csv(write_file(dir, "b.csv", "x,y\n1\n")), InputError);
    CHECK_THROWS_AS(io::read_csv(write_file(dir, "c.csv", "x,y\n1,abc\n")), InputError);
    CHECK_THROWS_AS(io::read_csv(write_file(dir, "d.csv", "x,y\n")), InputError);
    CHECK_THROWS_AS(io::read_csv(dir / "missing.csv"), InputError);
}

TEST_CASE("quote files") {
    const auto dir = scratch("quotes");
    const auto ois = io::read_quote_file(write_file(dir, "o.csv", kOis));
    CHECK(ois.kind == QuoteKind::OIS);
    CHECK(ois.rates.front() == 0.00072);
    const auto cds = io::read_quote_file(write_file(dir, "c.csv", kCds));
    CHECK(cds.kind == QuoteKind::CDS);
    CHECK(cds.rates.front() == doctest::Approx(0.0058).epsilon(1e-15));
    CHECK_THROWS_AS(io::read_quote_file(write_file(dir, "x.csv", "t,value\n1,2\n")), InputError);
}

TEST_CASE("discount curve file") {
    const auto dir = scratch("disc");
    const auto d = io::read_discount_curve(
        write_file(dir, "d.csv", "t,discount\n0,1\n1,0.97\n10,0.75\n"));
    CHECK(d.discount(0.0) == 1.0);
    CHECK(d.discount(1.0) == doctest::Approx(0.97));
    CHECK(d.discount(0.5) == doctest::Approx(std::sqrt(0.97)));
    CHECK(d.forward(0.5) == doctest::Approx(-std::log(0.97)));
    CHECK_THROWS_AS(d.discount(11.0), DomainError);
    CHECK_THROWS_AS(io::read_discount_curve(write_file(dir, "e.csv", "t,discount\n1,0.9\n")),
                    InputError);
}

TEST_CASE("number formatting") {
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("ois-bounds command") {
    const auto dir = scratch("ois_bounds");
    const auto in = write_file(dir, "q.csv", kOis);
    REQUIRE(run(config(cli::Command::OisBounds, in, dir / "out")) == 0);
    const auto bounds = slurp(dir / "out" / "bounds.csv");
    CHECK(count_lines(bounds) == 15);
    CHECK(std::count(bounds.begin(), bounds.end(), 'x') >= 10);  // "exact"
    CHECK(bounds.find("15,interval,") != std::string::npos);
    CHECK(count_lines(slurp(dir / "out" / "rectangles.csv")) == 15);
    CHECK(fs::exists(dir / "out" / "bounds.json"));
    CHECK(fs::exists(dir / "out" / "extremal.csv"));
}

TEST_CASE("repeated runs write identical bytes") {
    const auto dir = scratch("repeat");
    const auto in = write_file(dir, "q.csv", kOis);
    for (auto c : {cli::Command::OisBounds, cli::Command::Calibrate}) {
        REQUIRE(run(config(c, in, dir / "a")) == 0);
        REQUIRE(run(config(c, in, dir / "b")) == 0);
    }
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
    }
}

TEST_CASE("detect-arb exit codes") {
    const auto dir = scratch("detect");
    const auto clean = write_file(dir, "clean.csv", "maturity_years,rate\n1,0.01\n2,0.02\n5,0.03\n");
    CHECK(run(config(cli::Command::DetectArb, clean, dir / "c")) == 0);
    const auto bad = write_file(dir, "bad.csv", "maturity_years,rate\n1,0.01\n2,0.00001\n");
    CHECK(run(config(cli::Command::DetectArb, bad, dir / "b")) == 2);
    CHECK(slurp(dir / "b" / "arbitrage.json").find("\"index\": 2") != std::string::npos);
    const auto cds = write_file(dir, "cds.csv", kCds);
    CHECK(run(config(cli::Command::DetectArb, cds, dir / "d")) == 0);
    CHECK(run(config(cli::Command::OisBounds, bad, dir / "e")) == 2);
}

TEST_CASE("input errors map to exit code one") {
    const auto dir = scratch("input");
    const auto in = write_file(dir, "q.csv", "maturity_years,rate\n1,-0.01\n");
    CHECK(run(config(cli::Command::OisBounds, in, dir / "o")) == 1);
    CHECK(run(config(cli::Command::OisBounds, dir / "none.csv", dir / "o")) == 1);
    const auto cds = write_file(dir, "c.csv", kCds);
    CHECK(run(config(cli::Command::OisBounds, cds, dir / "o")) == 1);
    CHECK_THROWS_AS(cli::parse_command("frobnicate"), InputError);
    CHECK(cli::parse_anchor("12.5:0.8") == std::pair<double, double>{12.5, 0.8});
    CHECK_THROWS_AS(cli::parse_anchor("12.5"), InputError);
}

TEST_CASE("calibration failure maps to exit code three") {
    const auto dir = scratch("calfail");
    const auto in = write_file(dir, "q.csv", "maturity_years,rate\n1,10\n");
    CHECK(run(config(cli::Command::Calibrate, in, dir / "o")) == 3);
    const auto err = slurp(dir / "o" / "error.json");
    CHECK(err.find("no_solution") != std::string::npos);
}

TEST_CASE("cds commands") {
    const auto dir = scratch("cds");
    const auto in = write_file(dir, "c.csv", kCds);
    CHECK(run(config(cli::Command::CdsBounds, in, dir / "b")) == 0);
    CHECK(count_lines(slurp(dir / "b" / "bounds.csv")) == 5);
    auto cfg = config(cli::Command::Calibrate, in, dir / "c");
    cfg.x0 = 0.0097;
    CHECK(run(cfg) == 0);
    CHECK(slurp(dir / "c" / "calibration.json").find("\"admissible\": true") != std::string::npos);
}

TEST_CASE("sweep and mix commands") {
    const auto dir = scratch("sweep");
    const auto in = write_file(dir, "q.csv", kOis);
    auto cfg = config(cli::Command::Sweep, in, dir / "s");
    cfg.values = {1.0, 10.0};
    CHECK(run(cfg) == 0);
    CHECK(fs::exists(dir / "s" / "curve_c_1.csv"));
    CHECK(fs::exists(dir / "s" / "curve_c_10.csv"));
    CHECK(fs::exists(dir / "s" / "bounds_overlay.csv"));
    CHECK(fs::exists(dir / "s" / "sweep.csv"));

    cfg.command = cli::Command::Mix;
    cfg.output_dir = dir / "m";
    CHECK(run(cfg) == 0);
    CHECK(fs::exists(dir / "m" / "mix.csv"));
    CHECK(fs::exists(dir / "m" / "mix_repricing.csv"));
    cfg.values = {1.0};
    CHECK(run(cfg) == 1);
}
