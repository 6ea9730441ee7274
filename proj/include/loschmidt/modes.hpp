#pragma once

#include "loschmidt/model.hpp"

#include <span>
#include <vector>

namespace loschmidt::modes {

/// Per-momentum Bogoliubov data for the paired momenta 1 <= k < N/2 of a uniform coupling.
struct ModeTable {
    int n_sites = 0;
    std::vector<int> k;
    std::vector<double> phi0;
    std::vector<double> phi1;
    /// phi1 - phi0 wrapped into (-pi, pi].
    std::vector<double> delta_phi;
    std::vector<double> energy0;
    std::vector<double> energy1;
    /// gamma == 0: the coupling commutes with the chain and the echo is identically 1.
    bool singular_limit = false;

    [[nodiscard]] std::size_t size() const noexcept { return k.size(); }
};

/// Quadrant-correct angle with tan(phi) = gamma sin(2 pi k/N) / (lambda + cos(2 pi k/N)).
/// Throws DegenerateModeError when numerator and denominator both vanish.
double bogoliubov_angle(double gamma, double lambda_eff, int k, int n_sites);

/// E_k = 2 sqrt((gamma sin q)^2 + (lambda + cos q)^2), q = 2 pi k / N.
double mode_energy(double gamma, double lambda_eff, int k, int n_sites);

ModeTable build_mode_table(const ChainSpec& spec, double g);
/// Rejects per-site couplings with ConfigError.
ModeTable build_mode_table(const ChainSpec& spec, const CouplingSpec& coupling);

/// L(t) = prod_k (1 - sin^2(dphi_k) sin^2(E1_k t)).
EchoSeries echo_product(const ModeTable& table, std::span<const double> times);

/// Weighted mean energy sum sin^2(dphi) E1 / sum sin^2(dphi) that sets the echo-peak frequency.
/// Throws UndefinedPeakError when every weight vanishes.
double analytic_peak_energy(const ModeTable& table);

/// Gaussian width alpha with alpha N/4 = sum sin^2(dphi_k) (E1_k - E)^2.
double analytic_alpha(const ModeTable& table);

struct ApproximateAlpha {
    double value = 0.0;
    /// Always true: this is a reconstruction of an earlier, unweighted estimate.
    bool approximate_reconstruction = true;
};

/// Dispersion-only width estimate: the energies' spread is measured about their
/// unweighted mean over the contributing modes (sin^2(dphi_k) > 1e-12) instead of the
/// weighted peak energy, then scaled by the mixing weights like analytic_alpha.
ApproximateAlpha dispersion_alpha_variant(const ModeTable& table);

}  // namespace loschmidt::modes
