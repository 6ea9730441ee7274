#include "loschmidt/error.hpp"
#include "loschmidt/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace loschmidt;

TEST_CASE("chain spec validation") {
    CHECK_NOTHROW(validate(ChainSpec{2, 1.0, 0.0, Boundary::periodic}));
    CHECK_THROWS_AS(validate(ChainSpec{1, 1.0, 0.0, Boundary::periodic}), ConfigError);
    CHECK_THROWS_AS(validate(ChainSpec{4, NAN, 0.0, Boundary::open}), ConfigError);
    CHECK_THROWS_AS(require_mode_engine_compatible(ChainSpec{5, 1.0, 0.0, Boundary::periodic}), ConfigError);
    CHECK_THROWS_AS(require_mode_engine_compatible(ChainSpec{6, 1.0, 0.0, Boundary::open}), ConfigError);
}

TEST_CASE("coupling spec") {
    const auto u = CouplingSpec::uniform(2.5);
    CHECK(u.is_uniform());
    CHECK(u.site_strengths(3) == std::vector<double>{2.5, 2.5, 2.5});

    const auto s = CouplingSpec::per_site({{1, 4.0}});
    CHECK_FALSE(s.is_uniform());
    CHECK(s.site_strengths(3) == std::vector<double>{0.0, 4.0, 0.0});
    CHECK_THROWS_AS((void)s.uniform_strength(), ConfigError);
    CHECK_THROWS_AS(validate(s, 1), ConfigError);
    CHECK_THROWS_AS(CouplingSpec::per_site({{0, 1.0}, {0, 2.0}}), ConfigError);
    CHECK_THROWS_AS(CouplingSpec::per_site({{-1, 1.0}}), ConfigError);
}

TEST_CASE("effective field per branch") {
    const ChainSpec spec{10, 1.0, 0.3, Boundary::periodic};
    const auto f = effective_field(spec, CouplingSpec::uniform(2.0));
    CHECK(f.lambda_0 == doctest::Approx(0.3));
    CHECK(f.lambda_1 == doctest::Approx(2.3));
    CHECK_THROWS_AS(effective_lambda(spec, CouplingSpec::per_site({{0, 1.0}}), 1), ConfigError);
    CHECK_THROWS_AS(effective_lambda(spec, CouplingSpec::uniform(1.0), 2), ConfigError);
}

TEST_CASE("qubit state normalization") {
    CHECK_NOTHROW(QubitState(1.0, 0.0));
    CHECK_THROWS_AS(QubitState(1.0, 1.0), ConfigError);
}

TEST_CASE("purity") {
    const double h = 1.0 / std::sqrt(2.0);
    const QubitState plus(h, h);
    CHECK(purity(plus, 1.0) == doctest::Approx(1.0));
    CHECK(purity(plus, 0.0) == doctest::Approx(0.5));
    CHECK(purity(QubitState(1.0, 0.0), 0.0) == doctest::Approx(1.0));

    const QubitState q(std::sqrt(0.3), std::sqrt(0.7));
    const double floor = 1.0 - 2.0 * 0.3 * 0.7;
    double last = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double p = purity(q, i / 20.0);
        CHECK(p >= floor - 1e-15);
        CHECK(p <= 1.0 + 1e-15);
        CHECK(p > last);
        last = p;
    }
}

TEST_CASE("echo clamping and validation") {
    CHECK(clamp_echo(1.0 + 1e-12) == 1.0);
    CHECK(clamp_echo(-1e-12) == 0.0);
    CHECK(clamp_echo(0.5) == 0.5);
    CHECK_THROWS_AS(clamp_echo(1.1), RangeError);
    CHECK_THROWS_AS(clamp_echo(-0.01), RangeError);

    EchoSeries bad{{0.0, 1.0}, {0.5, 0.4}};
    CHECK_THROWS_AS(validate(bad), RangeError);
    EchoSeries unsorted{{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(validate(unsorted), ConfigError);
}

TEST_CASE("off-diagonal factor") {
    EchoSeries s{{0.0, 1.0}, {1.0, 0.25}};
    const auto f = offdiagonal_factor(s, {0.3, 0.4});
    CHECK(f[0] == doctest::Approx(0.5));
    CHECK(f[1] == doctest::Approx(0.25));
}

TEST_CASE("time grid includes the end point") {
    const auto t = time_grid(1.5, 5e-4);
    CHECK(t.size() == 3001);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == doctest::Approx(1.5));
    CHECK_THROWS_AS(time_grid(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(time_grid(-1.0, 0.1), ConfigError);
}
