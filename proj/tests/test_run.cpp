#include "loschmidt/csv.hpp"
#include "loschmidt/error.hpp"
#include "loschmidt/run.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace loschmidt;
using namespace loschmidt::run;

namespace {

RunConfig fig2(double g) {
    RunConfig c;
    c.spec = {100, 1.0, 0.0, Boundary::periodic};
    c.coupling = CouplingSpec::uniform(g);
    c.t_max = 1.5;
    c.dt = 5e-4;
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(csv::format_number(1.0) == "1");
    CHECK(csv::format_number(0.1234567890123456) == "0.123456789012");
    CHECK(csv::format_number(5.4845949007019013e-9) == "5.4845949007e-09");
    CHECK(csv::escape_field("a,b") == "\"a,b\"");
    CHECK(csv::escape_field("say \"x\"") == "\"say \"\"x\"\"\"");
}

TEST_CASE("series round trip and parse errors") {
    EchoSeries s{{0.0, 0.5, 1.0}, {1.0, 0.25, 0.125}};
    std::stringstream buf;
    csv::write_series(buf, s);
    CHECK(buf.str() == "t,L\n0,1\n0.5,0.25\n1,0.125\n");
    const auto back = csv::read_series(buf);
    CHECK(back.times == s.times);
    CHECK(back.values == s.values);

    std::stringstream bad_header("time,L\n0,1\n");
    CHECK_THROWS_AS(csv::read_series(bad_header), ParseError);
    std::stringstream bad_row("t,L\n0,1\n0.5,abc\n");
    try {
        csv::read_series(bad_row);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::stringstream extra("t,L\n0,1,2\n");
    CHECK_THROWS_AS(csv::read_series(extra), ParseError);
    std::stringstream backwards("t,L\n0,1\n0.5,0.9\n0.4,0.8\n");
    CHECK_THROWS_AS(csv::read_series(backwards), ParseError);
}

TEST_CASE("run config invariants") {
    RunConfig c = fig2(40.0);
    CHECK_NOTHROW(validate(c));
    c.spec.boundary = Boundary::open;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = fig2(40.0);
    c.spec.n_sites = 99;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = fig2(40.0);
    c.coupling = CouplingSpec::per_site({{0, 1.0}});
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.engine = Engine::ed;
    CHECK_THROWS_AS(validate(c), SizeError);
    c.engine = Engine::quadratic;
    CHECK_NOTHROW(validate(c));
    c.dt = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = fig2(40.0);
    c.t_max = -1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = fig2(40.0);
    c.engine = Engine::short_time;
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(parse_engine("dmrg"), ConfigError);
    CHECK(parse_engine("strong_coupling") == Engine::strong_coupling);
}

TEST_CASE("default time step") {
    CHECK(default_dt(0.0) == 5e-4);
    CHECK(default_dt(100.0) == 5e-4);
    CHECK(default_dt(200.0) == doctest::Approx(std::numbers::pi / (16.0 * 404.0)));
    RunConfig c = fig2(200.0);
    c.dt.reset();
    CHECK(resolved_dt(c) == default_dt(200.0));
}

TEST_CASE("window and axis parsing") {
    const auto w = parse_window("2:8");
    CHECK(w.begin == 2.0);
    CHECK(w.end == 8.0);
    CHECK_THROWS_AS(parse_window("8:2"), ConfigError);
    CHECK_THROWS_AS(parse_window("2-8"), ConfigError);

    SweepConfig s;
    CHECK_THROWS_AS(validate(s), ConfigError);
    add_axis(s, "g=5,10,40");
    add_axis(s, "n=40,60");
    CHECK(s.g_axis == std::vector<double>{5, 10, 40});
    CHECK(grid_size(s) == 6);
    CHECK_THROWS_AS(add_axis(s, "mu=1"), ConfigError);
    CHECK_THROWS_AS(add_axis(s, "g="), ConfigError);
    CHECK_THROWS_AS(add_axis(s, "n=4.5"), ConfigError);
}

TEST_CASE("engines agree through the run layer") {
    RunConfig c = fig2(40.0);
    c.t_max = 0.3;
    const auto modes = compute_echo(c);
    c.engine = Engine::quadratic;
    const auto quad = compute_echo(c);
    REQUIRE(modes.size() == quad.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        CHECK(std::abs(modes.values[i] - quad.values[i]) < 1e-8);
    }
    c = fig2(0.0);
    for (double v : compute_echo(c).values) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("echo command output is reproducible") {
    const auto dir = std::filesystem::temp_directory_path() / "loschmidt_run_test";
    std::filesystem::create_directories(dir);
    RunConfig c = fig2(40.0);
    c.fit.models = {FitModel::gaussian};
    std::stringstream log;
    std::stringstream out;
    c.out = (dir / "a.csv").string();
    cmd_echo(c, out, log);
    c.out = (dir / "b.csv").string();
    cmd_echo(c, out, log);
    CHECK(slurp((dir / "a.csv").string()) == slurp((dir / "b.csv").string()));
    CHECK(std::filesystem::exists(dir / "a.csv.meta"));
    CHECK(std::filesystem::exists(dir / "a.csv.plot.py"));
    CHECK(slurp((dir / "a.csv.meta").string()).find("engine=modes") != std::string::npos);
    CHECK(slurp((dir / "a.csv").string()).rfind("t,L\n0,1\n", 0) == 0);

    std::stringstream report;
    FitOptions opts;
    opts.models = {FitModel::gaussian};
    cmd_fit((dir / "a.csv").string(), 100, opts, "", report);
    CHECK(report.str().find("gaussian,alpha,0.98") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep output does not depend on the worker count") {
    SweepConfig s;
    s.base = fig2(0.0);
    s.base.dt.reset();
    s.base.fit.peak_threshold = 0.05;
    add_axis(s, "g=40,5,10");
    add_axis(s, "lambda=0.2,0");
    std::stringstream one;
    std::stringstream three;
    write_sweep(one, run_sweep(s));
    s.jobs = 3;
    write_sweep(three, run_sweep(s));
    CHECK(one.str() == three.str());

    const auto rows = run_sweep(s);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].lambda == 0.0);
    CHECK(rows[0].g == 5.0);
    CHECK(rows[2].g == 40.0);
    CHECK(rows[3].lambda == 0.2);
    for (const auto& r : rows) {
        CHECK(r.error.empty());
    }
}

TEST_CASE("failing grid points are reported in the error column") {
    SweepConfig s;
    s.base = fig2(0.0);
    add_axis(s, "g=0,40");
    const auto rows = run_sweep(s);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[1].error.empty());
    std::stringstream out;
    write_sweep(out, rows);
    CHECK(out.str().rfind("gamma,lambda,g,n,alpha,residual,threshold_flag,fit,error\n", 0) == 0);
}

TEST_CASE("validation harness is deterministic") {
    const auto a = run_validation(6, 7, 6);
    const auto b = run_validation(6, 7, 6);
    std::stringstream sa;
    std::stringstream sb;
    write_validation(sa, a);
    write_validation(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(a.passed());
    CHECK_THROWS_AS(run_validation(15, 1), ConfigError);
}

TEST_CASE("purity command") {
    RunConfig c = fig2(5.0);
    c.t_max = 0.01;
    std::stringstream out;
    cmd_purity(c, QubitState(std::sqrt(0.5), std::sqrt(0.5)), out);
    std::string header;
    std::getline(out, header);
    CHECK(header == "t,L,purity");
    std::string first;
    std::getline(out, first);
    CHECK(first == "0,1,1");
}
