#include "loschmidt/envelope.hpp"
#include "loschmidt/error.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace loschmidt;
using namespace loschmidt::envelope;

namespace {

// Gaussian envelope times a fast cos^2 carrier.
EchoSeries carrier(double alpha, int n, double omega, double t_max, double dt) {
    EchoSeries s;
    for (int i = 0; i * dt <= t_max + 1e-12; ++i) {
        const double t = i * dt;
        const double c = std::cos(omega * t);
        s.times.push_back(t);
        s.values.push_back(std::exp(-alpha * t * t * n / 4.0) * c * c);
    }
    return s;
}

PeakSet synthetic(std::vector<double> t, std::vector<double> v) {
    PeakSet p;
    p.times = std::move(t);
    p.values = std::move(v);
    return p;
}

}  // namespace

TEST_CASE("peak search on a sampled carrier") {
    const auto s = carrier(0.1, 10, 10.0, 1.5, 1e-3);
    const auto up = find_peaks(s, Side::upper);
    REQUIRE(up.size() >= 3);
    // Maxima sit near multiples of pi/omega.
    for (std::size_t i = 0; i < up.size(); ++i) {
        CHECK(std::abs(up.times[i] - (i + 1) * std::numbers::pi / 10.0) < 5e-3);
    }
    const auto down = find_peaks(s, Side::lower);
    for (double v : down.values) {
        CHECK(v < 1e-4);
    }
}

TEST_CASE("plateaus report the leftmost sample") {
    EchoSeries s{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, {1, 0.2, 0.5, 0.5, 0.5, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}};
    const auto p = find_peaks(s, Side::upper, 20.0);
    REQUIRE(p.size() == 1);
    CHECK(p.times[0] == 2.0);
    // A plateau running to the end is not a peak.
    EchoSeries edge{{0, 1, 2, 3, 4}, {1, 0.2, 0.5, 0.5, 0.5}};
    CHECK(find_peaks(edge, Side::upper, 20.0).empty());
}

TEST_CASE("peak search input checks") {
    EchoSeries tiny{{0, 1, 2, 3}, {1, 0.5, 0.7, 0.4}};
    CHECK_THROWS_AS(find_peaks(tiny, Side::upper), InsufficientDataError);
    const auto coarse = carrier(0.1, 10, 10.0, 3.0, 0.05);
    CHECK_THROWS_AS(find_peaks(coarse, Side::upper), SamplingError);
    const auto fine = carrier(0.1, 10, 10.0, 3.0, 0.01);
    CHECK_THROWS_AS(find_peaks(fine, Side::upper, 0.05), SamplingError);
    CHECK_NOTHROW(find_peaks(fine, Side::upper, std::numbers::pi / 10.0));
}

TEST_CASE("dominant peaks drop secondary ripples") {
    auto p = synthetic({1.0, 1.1, 1.5, 2.0, 2.05}, {0.9, 0.3, 0.8, 0.2, 0.7});
    const auto d = dominant_peaks(p, 0.2);
    CHECK(d.times == std::vector<double>{1.0, 1.5, 2.05});
    p.side = Side::lower;
    const auto l = dominant_peaks(p, 0.2);
    CHECK(l.times == std::vector<double>{1.1, 1.5, 2.0});
}

TEST_CASE("origin is prepended once") {
    EchoSeries s{{0.0, 0.5, 1.0}, {1.0, 0.5, 0.7}};
    const auto p = with_origin(synthetic({0.5}, {0.9}), s);
    CHECK(p.times == std::vector<double>{0.0, 0.5});
    CHECK(p.values.front() == 1.0);
    CHECK(with_origin(p, s).size() == 2);
}

TEST_CASE("Gaussian fit recovers exact data") {
    const int n = 100;
    const double alpha = 0.83;
    std::vector<double> t{0.05, 0.1, 0.15};
    std::vector<double> v;
    for (double x : t) {
        v.push_back(0.97 * std::exp(-alpha * x * x * n / 4.0));
    }
    const auto fit = fit_gaussian(synthetic(t, v), n);
    CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(0.97)).epsilon(1e-12));
    CHECK(fit.residual < 1e-10);
    CHECK(fit.points_used == 3);
    CHECK_FALSE(fit.intercept_fixed);

    // A uniform rescaling moves only the intercept.
    std::vector<double> scaled;
    for (double x : v) {
        scaled.push_back(0.9 * x);
    }
    CHECK(std::abs(fit_gaussian(synthetic(t, scaled), n).alpha - fit.alpha) < 1e-9);
}

TEST_CASE("Gaussian fit thresholds and fallbacks") {
    const auto p = synthetic({0.1, 0.2, 0.3, 0.4}, {0.8, 0.5, 0.3, 0.1});
    CHECK_THROWS_AS(fit_gaussian(p, 10), InsufficientDataError);
    CHECK(fit_gaussian(p, 10, 0.05).points_used == 4);

    const auto anchored = fit_gaussian_anchored(p, 10);
    CHECK(anchored.intercept_fixed);
    CHECK(anchored.points_used == 2);
    const double x1 = 0.01 * 10 / 4.0;
    const double x2 = 0.04 * 10 / 4.0;
    const double expected = -(x1 * std::log(0.8) + x2 * std::log(0.5)) / (x1 * x1 + x2 * x2);
    CHECK(anchored.alpha == doctest::Approx(expected));
    CHECK(fit_gaussian_auto(p, 10).intercept_fixed);
    CHECK_FALSE(fit_gaussian_auto(p, 10, 0.05).intercept_fixed);
    CHECK_THROWS_AS(fit_gaussian_anchored(p, 10, 0.9), InsufficientDataError);
    CHECK_THROWS_AS(fit_gaussian(synthetic({0.1, 0.2, 0.3}, {0.5, 0.6, 0.7}), 10), NumericalError);
}

TEST_CASE("power-law fit") {
    std::vector<double> t;
    std::vector<double> v;
    for (int i = 0; i < 12; ++i) {
        t.push_back(1.0 + 0.5 * i);
        v.push_back(0.4 * std::pow(t.back(), -1.1));
    }
    const auto p = synthetic(t, v);
    const auto fit = fit_powerlaw(p, {1.5, 5.0});
    CHECK(fit.exponent == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(fit.prefactor == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(fit.points_used == 8);
    CHECK_FALSE(fit.poor_fit);
    CHECK_THROWS_AS(fit_powerlaw(p, {1.0, 2.5}), InsufficientDataError);

    auto zero = p;
    zero.values[3] = 0.0;
    CHECK_THROWS_AS(fit_powerlaw(zero, {0.5, 10.0}), RangeError);

    auto noisy = p;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        noisy.values[i] *= i % 2 == 0 ? 1.5 : 0.6;
    }
    CHECK(fit_powerlaw(noisy, {0.5, 10.0}).poor_fit);
}

TEST_CASE("crossover of the two models") {
    GaussianFit g;
    g.alpha = 1.0;
    g.n_scale = 4;
    g.intercept = 0.0;
    PowerLawFit p;
    p.exponent = 1.0;
    p.prefactor = 0.1;
    const auto t = crossover_time(g, p);
    REQUIRE(t.has_value());
    CHECK(std::exp(-*t * *t) == doctest::Approx(0.1 / *t).epsilon(1e-10));
    CHECK(*t > std::sqrt(0.5));

    p.prefactor = 1e3;
    CHECK_FALSE(crossover_time(g, p).has_value());
    p.exponent = 0.0;
    CHECK_FALSE(crossover_time(g, p).has_value());
}

TEST_CASE("universality threshold") {
    const std::vector<std::pair<double, double>> curve{{1, 0.5}, {2, 0.8}, {4, 0.95}, {8, 0.98}, {16, 0.99}};
    CHECK(universality_threshold(curve) == 4.0);
    CHECK(universality_threshold(curve, 0.25) == 2.0);
    CHECK(universality_threshold(curve, 1.0) == 1.0);
    // Monotone in the tolerance.
    double last = std::numeric_limits<double>::infinity();
    for (double tol : {0.001, 0.01, 0.02, 0.1, 0.5, 1.0}) {
        const double g = universality_threshold(curve, tol);
        CHECK(g <= last);
        last = g;
    }
    const std::vector<std::pair<double, double>> drifting{{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 2.0}};
    CHECK(std::isinf(universality_threshold(drifting)));
    const std::vector<std::pair<double, double>> few{{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}};
    CHECK_THROWS_AS(universality_threshold(few), ConfigError);
    const std::vector<std::pair<double, double>> unsorted{{1, 1.0}, {3, 1.0}, {2, 1.0}, {4, 1.0}, {5, 1.0}};
    CHECK_THROWS_AS(universality_threshold(unsorted), ConfigError);
}

TEST_CASE("envelope interpolation and distance") {
    const auto a = synthetic({0.0, 1.0, 2.0}, {1.0, 0.5, 0.25});
    CHECK(interpolate(a, 0.5) == doctest::Approx(0.75));
    CHECK(interpolate(a, -1.0) == 1.0);
    CHECK(interpolate(a, 5.0) == 0.25);
    CHECK(envelope_distance(a, a, {0.0, 2.0}) == 0.0);

    const auto b = synthetic({0.5, 1.5}, {0.8, 0.3});
    // Overlap [0.5, 1.5]; grid {0.5, 1.0, 1.5}.
    CHECK(envelope_distance(a, b, {0.0, 10.0}) == doctest::Approx(0.075));
    CHECK_THROWS_AS(envelope_distance(a, b, {3.0, 4.0}), InsufficientDataError);
    CHECK_THROWS_AS(envelope_distance(a, PeakSet{}, {0.0, 1.0}), InsufficientDataError);
}
