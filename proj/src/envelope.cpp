#include "loschmidt/envelope.hpp"

#include "loschmidt/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace loschmidt::envelope {

namespace {

constexpr double kMinSamplesPerPeriod = 8.0;

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

double rms(const std::vector<double>& r) {
    double acc = 0.0;
    for (double x : r) {
        acc += x * x;
    }
    return r.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(r.size()));
}

// Ordinary least squares y = c + slope x. Returns {c, slope}.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw InsufficientDataError("fit abscissae are all equal");
    }
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

}  // namespace

PeakSet find_peaks(const EchoSeries& series, Side side, std::optional<double> expected_period) {
    validate(series);
    const std::size_t n = series.size();
    if (n < 5) {
        throw InsufficientDataError("peak search needs at least 5 samples, got " + std::to_string(n));
    }
    const double sign = side == Side::upper ? 1.0 : -1.0;
    const double dt = (series.times.back() - series.times.front()) / static_cast<double>(n - 1);

    if (expected_period && *expected_period / dt < kMinSamplesPerPeriod) {
        throw SamplingError("series resolves the fast oscillation with " + std::to_string(*expected_period / dt) +
                            " samples per period; at least 8 are required");
    }

    PeakSet peaks;
    peaks.side = side;
    std::vector<std::size_t> index;
    std::size_t i = 1;
    while (i + 1 < n) {
        const double y = sign * series.values[i];
        if (y > sign * series.values[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && sign * series.values[j + 1] == y) {
                ++j;
            }
            if (j + 1 < n && sign * series.values[j + 1] < y) {
                index.push_back(i);
                peaks.times.push_back(series.times[i]);
                peaks.values.push_back(series.values[i]);
            }
            i = j + 1;
        } else {
            ++i;
        }
    }

    if (!expected_period && index.size() >= 3) {
        std::vector<double> gaps;
        for (std::size_t k = 1; k < index.size(); ++k) {
            gaps.push_back(static_cast<double>(index[k] - index[k - 1]));
        }
        const double spacing = median(gaps);
        if (spacing < kMinSamplesPerPeriod) {
            throw SamplingError("extrema are " + std::to_string(spacing) +
                                " samples apart; the series under-samples the oscillation");
        }
    }
    return peaks;
}

PeakSet dominant_peaks(const PeakSet& peaks, double half_width) {
    const double sign = peaks.side == Side::upper ? 1.0 : -1.0;
    PeakSet out;
    out.side = peaks.side;
    const std::size_t n = peaks.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sign * peaks.values[i];
        bool keep = true;
        for (std::size_t j = i; j-- > 0 && peaks.times[i] - peaks.times[j] < half_width;) {
            if (sign * peaks.values[j] >= v) {
                keep = false;
                break;
            }
        }
        for (std::size_t j = i + 1; keep && j < n && peaks.times[j] - peaks.times[i] < half_width; ++j) {
            if (sign * peaks.values[j] > v) {
                keep = false;
            }
        }
        if (keep) {
            out.times.push_back(peaks.times[i]);
            out.values.push_back(peaks.values[i]);
        }
    }
    return out;
}

PeakSet with_origin(const PeakSet& peaks, const EchoSeries& series) {
    if (series.times.empty() || series.times.front() != 0.0 || (!peaks.empty() && peaks.times.front() == 0.0)) {
        return peaks;
    }
    PeakSet out;
    out.side = peaks.side;
    out.times.reserve(peaks.size() + 1);
    out.values.reserve(peaks.size() + 1);
    out.times.push_back(0.0);
    out.values.push_back(series.values.front());
    out.times.insert(out.times.end(), peaks.times.begin(), peaks.times.end());
    out.values.insert(out.values.end(), peaks.values.begin(), peaks.values.end());
    return out;
}

GaussianFit fit_gaussian(const PeakSet& peaks, int n_sites, double threshold) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        if (peaks.values[i] > threshold && peaks.values[i] > 0.0) {
            x.push_back(peaks.times[i] * peaks.times[i] * n_sites / 4.0);
            y.push_back(std::log(peaks.values[i]));
        }
    }
    if (x.size() < 3) {
        throw InsufficientDataError("Gaussian fit needs 3 peaks above " + std::to_string(threshold) + ", found " +
                                    std::to_string(x.size()));
    }
    const auto [c, slope] = line_fit(x, y);
    if (slope > 0.0) {
        throw NumericalError("peak envelope grows; no Gaussian decay to fit");
    }
    std::vector<double> r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.push_back(y[i] - (c + slope * x[i]));
    }
    GaussianFit fit;
    fit.alpha = -slope;
    fit.n_scale = n_sites;
    fit.residual = rms(r);
    fit.points_used = static_cast<int>(x.size());
    fit.intercept = c;
    fit.intercept_fixed = false;
    fit.threshold = threshold;
    return fit;
}

GaussianFit fit_gaussian_anchored(const PeakSet& peaks, int n_sites, double threshold) {
    double sxx = 0.0;
    double sxy = 0.0;
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        if (peaks.values[i] > threshold && peaks.values[i] > 0.0 && peaks.times[i] > 0.0) {
            x.push_back(peaks.times[i] * peaks.times[i] * n_sites / 4.0);
            y.push_back(std::log(peaks.values[i]));
            sxx += x.back() * x.back();
            sxy += x.back() * y.back();
        }
    }
    if (x.empty()) {
        throw InsufficientDataError("no peak above " + std::to_string(threshold) + " to anchor a Gaussian fit");
    }
    const double alpha = -sxy / sxx;
    if (alpha < 0.0) {
        throw NumericalError("peak envelope grows; no Gaussian decay to fit");
    }
    std::vector<double> r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.push_back(y[i] + alpha * x[i]);
    }
    GaussianFit fit;
    fit.alpha = alpha;
    fit.n_scale = n_sites;
    fit.residual = rms(r);
    fit.points_used = static_cast<int>(x.size());
    fit.intercept = 0.0;
    fit.intercept_fixed = true;
    fit.threshold = threshold;
    return fit;
}

GaussianFit fit_gaussian_auto(const PeakSet& peaks, int n_sites, double threshold) {
    const auto qualifying = std::count_if(peaks.values.begin(), peaks.values.end(),
                                          [&](double v) { return v > threshold && v > 0.0; });
    if (qualifying >= 3) {
        return fit_gaussian(peaks, n_sites, threshold);
    }
    return fit_gaussian_anchored(peaks, n_sites, threshold);
}

PowerLawFit fit_powerlaw(const PeakSet& peaks, TimeWindow window) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const double t = peaks.times[i];
        if (t < window.begin || t > window.end) {
            continue;
        }
        if (!(t > 0.0) || !(peaks.values[i] > 0.0)) {
            throw RangeError("power-law fit needs positive times and values inside the window");
        }
        x.push_back(std::log(t));
        y.push_back(std::log(peaks.values[i]));
    }
    if (x.size() < 5) {
        throw InsufficientDataError("power-law fit needs 5 peaks in [" + std::to_string(window.begin) + ", " +
                                    std::to_string(window.end) + "], found " + std::to_string(x.size()));
    }
    const auto [c, slope] = line_fit(x, y);
    std::vector<double> r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.push_back(y[i] - (c + slope * x[i]));
    }
    PowerLawFit fit;
    fit.exponent = -slope;
    fit.prefactor = std::exp(c);
    fit.window = window;
    fit.residual = rms(r);
    fit.points_used = static_cast<int>(x.size());
    fit.poor_fit = fit.residual > kPowerLawPoorResidual;
    return fit;
}

std::optional<double> crossover_time(const GaussianFit& gaussian, const PowerLawFit& power) {
    const double a = gaussian.alpha * gaussian.n_scale / 4.0;
    const double p = power.exponent;
    if (!(a > 0.0) || !(p > 0.0)) {
        return std::nullopt;
    }
    // f(t) = ln Gaussian - ln power law, maximal at t = sqrt(p / 2a); the crossover is the
    // later root, after which the power law stays above the Gaussian.
    auto f = [&](double t) { return gaussian.intercept - a * t * t - std::log(power.prefactor) + p * std::log(t); };
    double lo = std::sqrt(p / (2.0 * a));
    if (f(lo) < 0.0) {
        return std::nullopt;
    }
    double hi = 2.0 * lo;
    while (f(hi) > 0.0) {
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double universality_threshold(std::span<const std::pair<double, double>> alpha_curve, double rel_tol) {
    if (alpha_curve.size() < 5) {
        throw ConfigError("universality threshold needs at least 5 sampled couplings");
    }
    for (std::size_t i = 1; i < alpha_curve.size(); ++i) {
        if (!(alpha_curve[i].first > alpha_curve[i - 1].first)) {
            throw ConfigError("coupling values must be strictly increasing");
        }
    }
    std::size_t start = alpha_curve.size() - 1;
    for (std::size_t j = alpha_curve.size() - 1; j-- > 0;) {
        const double change = std::abs(alpha_curve[j + 1].second - alpha_curve[j].second) /
                              std::abs(alpha_curve[j].second);
        if (!(change < rel_tol)) {
            break;
        }
        start = j;
    }
    if (start == alpha_curve.size() - 1) {
        return std::numeric_limits<double>::infinity();
    }
    return alpha_curve[start].first;
}

double interpolate(const PeakSet& peaks, double t) {
    if (peaks.empty()) {
        throw InsufficientDataError("cannot interpolate an empty peak set");
    }
    if (t <= peaks.times.front()) {
        return peaks.values.front();
    }
    if (t >= peaks.times.back()) {
        return peaks.values.back();
    }
    const auto hi = std::upper_bound(peaks.times.begin(), peaks.times.end(), t);
    const auto k = static_cast<std::size_t>(hi - peaks.times.begin());
    const double t0 = peaks.times[k - 1];
    const double t1 = peaks.times[k];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * peaks.values[k - 1] + w * peaks.values[k];
}

double envelope_distance(const PeakSet& a, const PeakSet& b, TimeWindow window) {
    if (a.empty() || b.empty()) {
        throw InsufficientDataError("envelope comparison needs two nonempty peak sets");
    }
    const double lo = std::max({window.begin, a.times.front(), b.times.front()});
    const double hi = std::min({window.end, a.times.back(), b.times.back()});
    if (!(hi >= lo)) {
        throw InsufficientDataError("peak sets do not overlap inside the window");
    }
    double dist = std::max(std::abs(interpolate(a, lo) - interpolate(b, lo)),
                           std::abs(interpolate(a, hi) - interpolate(b, hi)));
    for (const PeakSet* set : {&a, &b}) {
        for (double t : set->times) {
            if (t >= lo && t <= hi) {
                dist = std::max(dist, std::abs(interpolate(a, t) - interpolate(b, t)));
            }
        }
    }
    return dist;
}

}  // namespace loschmidt::envelope
