#pragma once

#include "loschmidt/model.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace loschmidt::envelope {

enum class Side { upper, lower };

/// Local maxima (upper) or minima (lower) of an echo series.
struct PeakSet {
    std::vector<double> times;
    std::vector<double> values;
    Side side = Side::upper;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] bool empty() const noexcept { return times.empty(); }
};

struct TimeWindow {
    double begin = 0.0;
    double end = 0.0;
};

/// Strict interior extrema by three-point comparison; on a plateau the leftmost sample
/// is reported. `expected_period` is the period of the fast oscillation; without it the
/// median spacing of the detected extrema is used. Either way fewer than 8 samples per
/// period throws SamplingError. Series shorter than 5 samples throw InsufficientDataError.
PeakSet find_peaks(const EchoSeries& series, Side side, std::optional<double> expected_period = std::nullopt);

/// Keeps only extrema that dominate every other extremum closer than `half_width` in time.
/// Removes the small secondary ripples that appear between revivals.
PeakSet dominant_peaks(const PeakSet& peaks, double half_width);

/// Peaks with the t = 0 sample prepended when the series starts at t = 0 (L(0) = 1 is
/// the top of the envelope).
PeakSet with_origin(const PeakSet& peaks, const EchoSeries& series);

inline constexpr double kInverseE = 1.0 / std::numbers::e;

/// Fit of ln L_peak = c - alpha t^2 N / 4.
struct GaussianFit {
    double alpha = 0.0;
    int n_scale = 0;
    /// Root-mean-square residual of ln L.
    double residual = 0.0;
    int points_used = 0;
    /// c; fixed to zero when intercept_fixed.
    double intercept = 0.0;
    bool intercept_fixed = false;
    double threshold = kInverseE;
};

/// Least squares with free intercept over peaks above `threshold`.
/// Throws InsufficientDataError with fewer than 3 qualifying peaks.
GaussianFit fit_gaussian(const PeakSet& peaks, int n_sites, double threshold = kInverseE);

/// One-parameter fit of ln L_peak = -alpha t^2 N / 4 (envelope pinned to 1 at t = 0).
/// Needs at least one qualifying peak at t > 0.
GaussianFit fit_gaussian_anchored(const PeakSet& peaks, int n_sites, double threshold = kInverseE);

/// Free-intercept fit when at least 3 peaks qualify, otherwise the anchored fit.
GaussianFit fit_gaussian_auto(const PeakSet& peaks, int n_sites, double threshold = kInverseE);

/// Fit of ln L = ln A - p ln t.
struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    TimeWindow window;
    double residual = 0.0;
    int points_used = 0;
    /// Residual above kPowerLawPoorResidual: the data are not a power law in this window.
    bool poor_fit = false;
};

inline constexpr double kPowerLawPoorResidual = 0.1;

/// Throws InsufficientDataError with fewer than 5 peaks in the window and RangeError
/// for nonpositive values or times.
PowerLawFit fit_powerlaw(const PeakSet& peaks, TimeWindow window);

/// Time where the Gaussian and power-law models intersect, if they do after t = 0.
std::optional<double> crossover_time(const GaussianFit& gaussian, const PowerLawFit& power);

/// Smallest sampled g after which every successive relative change of alpha stays below
/// rel_tol. Returns +infinity when the last change already violates it.
/// Throws ConfigError for fewer than 5 points or g not strictly increasing.
double universality_threshold(std::span<const std::pair<double, double>> alpha_curve, double rel_tol = 0.05);

/// Sup-norm distance between two envelopes, each linearly interpolated between its
/// peaks, over the union of peak times inside the window covered by both.
double envelope_distance(const PeakSet& a, const PeakSet& b, TimeWindow window);

/// Linear interpolation of a peak set at time t (clamped to the end values outside).
double interpolate(const PeakSet& peaks, double t);

}  // namespace loschmidt::envelope
