#include "loschmidt/edoracle.hpp"
#include "loschmidt/error.hpp"
#include "loschmidt/modes.hpp"
#include "loschmidt/quadratic.hpp"

#include <doctest.h>

#include <cmath>

using namespace loschmidt;
using namespace loschmidt::quadratic;

TEST_CASE("quadratic Hamiltonian structure") {
    const ChainSpec spec{5, 0.6, 0.8, Boundary::open};
    const auto h = build_quadratic(spec, CouplingSpec::per_site({{2, 5.0}}), 1);
    CHECK(h.size() == 5);
    CHECK(h.a(2, 2) == doctest::Approx(2.0 * 5.8));
    CHECK(h.a(0, 0) == doctest::Approx(1.6));
    CHECK(h.a(0, 1) == doctest::Approx(-1.0));
    CHECK(h.a(0, 4) == 0.0);
    CHECK(h.b(0, 1) == doctest::Approx(-h.b(1, 0)));
    CHECK(std::abs(h.b(0, 1)) == doctest::Approx(0.6));
    CHECK_NOTHROW(validate(h));

    auto broken = h;
    broken.a(0, 1) += 1e-6;
    CHECK_THROWS_AS(validate(broken), ConfigError);
    broken = h;
    broken.b(0, 1) = broken.b(1, 0);
    CHECK_THROWS_AS(validate(broken), ConfigError);
    CHECK_THROWS_AS(build_quadratic(spec, CouplingSpec::uniform(1.0), 2), ConfigError);

    const auto ring = build_quadratic(ChainSpec{5, 0.6, 0.8, Boundary::periodic}, CouplingSpec::uniform(0.0), 0);
    CHECK(ring.a(0, 4) == doctest::Approx(-1.0));
}

TEST_CASE("ground state against exact diagonalization") {
    // Reference from a Kronecker-product diagonalization of the spin chain.
    const ChainSpec spec{6, 0.6, 0.8, Boundary::open};
    const auto gs = ground_state(build_quadratic(spec, CouplingSpec::uniform(0.0), 0));
    CHECK(gs.ground_energy == doctest::Approx(-5.569093248813217).epsilon(1e-12));
    CHECK(canonical_defect(gs) < 1e-10);
    CHECK_FALSE(gs.degenerate);
    CHECK(site_magnetization(gs, 2) == doctest::Approx(0.6441171172662244).epsilon(1e-12));
    CHECK_THROWS_AS(site_magnetization(gs, 6), ConfigError);
}

TEST_CASE("echo overlap against exact diagonalization") {
    const ChainSpec spec{6, 0.6, 0.8, Boundary::open};
    const auto coupling = CouplingSpec::per_site({{2, 5.0}});
    const auto gs = ground_state(build_quadratic(spec, coupling, 0));
    const std::vector<double> times{0.0, 0.4, 1.3};
    const auto e = echo_overlap(gs, build_quadratic(spec, coupling, 1), times);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(0.8277191170951762).epsilon(1e-10));
    CHECK(e.values[2] == doctest::Approx(0.5311445417217978).epsilon(1e-10));
}

TEST_CASE("fermion-periodic engine equals the mode product") {
    for (const double lambda : {0.0, 0.45, 1.6}) {
        const ChainSpec spec{12, 0.8, lambda, Boundary::periodic};
        const auto coupling = CouplingSpec::uniform(3.3);
        const auto gs = ground_state(build_quadratic(spec, coupling, 0));
        std::vector<double> times;
        for (int i = 0; i <= 40; ++i) {
            times.push_back(0.07 * i);
        }
        const auto q = echo_overlap(gs, build_quadratic(spec, coupling, 1), times);
        const auto m = modes::echo_product(modes::build_mode_table(spec, coupling), times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            CHECK(std::abs(q.values[i] - m.values[i]) < 1e-10);
        }
    }
}

TEST_CASE("echo overlap is independent of the worker count") {
    const ChainSpec spec{30, 1.0, 0.5, Boundary::periodic};
    const auto coupling = CouplingSpec::per_site({{0, 30.0}});
    const auto gs = ground_state(build_quadratic(spec, coupling, 0));
    const auto h1 = build_quadratic(spec, coupling, 1);
    std::vector<double> times;
    for (int i = 0; i < 50; ++i) {
        times.push_back(0.013 * i);
    }
    const auto one = echo_overlap(gs, h1, times, 1);
    const auto three = echo_overlap(gs, h1, times, 3);
    CHECK(one.values == three.values);
}

TEST_CASE("large-field ground energy tends to -N lambda") {
    const ChainSpec spec{40, 1.0, 200.0, Boundary::periodic};
    const auto gs = ground_state(build_quadratic(spec, CouplingSpec::uniform(0.0), 0));
    CHECK(gs.ground_energy / (-40.0 * 200.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("short-time formula") {
    const std::vector<double> times{0.0, 0.1, 0.5};
    const auto e = short_time_echo(0.6, 3.0, times);
    CHECK(e.values[0] == 1.0);
    CHECK(e.values[1] == doctest::Approx(1.0 - 0.64 * std::pow(std::sin(0.3), 2)));
    // First minimum equals <Z>^2.
    const std::vector<double> mid{M_PI / 6.0};
    CHECK(short_time_echo(0.6, 3.0, mid).values[0] == doctest::Approx(0.36));
    CHECK_THROWS_AS(short_time_echo(1.5, 1.0, times), ConfigError);
}
