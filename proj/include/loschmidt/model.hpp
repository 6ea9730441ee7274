#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace loschmidt {

enum class Boundary { periodic, open };

/// XY chain H_C = -sum_j [(1+gamma)/2 X_j X_{j+1} + (1-gamma)/2 Y_j Y_{j+1} + lambda Z_j].
/// The bond coupling is the unit of energy; hbar = 1, so times are in inverse bond units.
struct ChainSpec {
    int n_sites = 2;
    double gamma = 1.0;
    double lambda = 0.0;
    Boundary boundary = Boundary::periodic;
};

/// Throws ConfigError unless n_sites >= 2 and the parameters are finite.
void validate(const ChainSpec& spec);

/// Throws ConfigError unless the chain can be handled by the translationally invariant engine.
void require_mode_engine_compatible(const ChainSpec& spec);

/// Qubit-chain coupling -g |1><1| (x) sum_j g_j Z_j, either uniform or on selected sites.
class CouplingSpec {
public:
    static CouplingSpec uniform(double g);
    static CouplingSpec per_site(std::vector<std::pair<int, double>> sites);

    [[nodiscard]] bool is_uniform() const noexcept { return uniform_; }
    /// Uniform strength g. Throws ConfigError for per-site couplings.
    [[nodiscard]] double uniform_strength() const;
    [[nodiscard]] const std::vector<std::pair<int, double>>& sites() const noexcept { return sites_; }
    /// g_j for every site of an n-site chain (zero on uncoupled sites).
    [[nodiscard]] std::vector<double> site_strengths(int n_sites) const;

private:
    CouplingSpec() = default;
    bool uniform_ = true;
    double g_ = 0.0;
    std::vector<std::pair<int, double>> sites_;
};

/// Throws ConfigError if a site index is outside [0, n_sites) or repeated.
void validate(const CouplingSpec& coupling, int n_sites);

class QubitState {
public:
    /// Throws ConfigError unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
    QubitState(std::complex<double> alpha, std::complex<double> beta);

    [[nodiscard]] std::complex<double> alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::complex<double> beta() const noexcept { return beta_; }

private:
    std::complex<double> alpha_;
    std::complex<double> beta_;
};

/// Sampled Loschmidt echo L(t).
struct EchoSeries {
    std::vector<double> times;
    std::vector<double> values;
    /// Set by the mode engine for gamma = 0, where the echo is identically 1.
    bool singular_limit = false;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// Checks matching lengths, strictly increasing times, values in [0, 1 + 1e-9] and L(0) = 1.
void validate(const EchoSeries& series);

/// Branch fields lambda^(a) = lambda + a g.
struct EffectiveField {
    double lambda_0;
    double lambda_1;
};

EffectiveField effective_field(const ChainSpec& spec, const CouplingSpec& coupling);
double effective_lambda(const ChainSpec& spec, const CouplingSpec& coupling, int branch);

/// Clamps values within 1e-9 of [0, 1]; anything further out throws RangeError.
double clamp_echo(double value);

/// Tr rho^2 = 1 - 2 |alpha beta|^2 (1 - L).
double purity(const QubitState& qubit, double echo_value);

/// |rho_01(t)| = |rho_01(0)| sqrt(L(t)).
std::vector<double> offdiagonal_factor(const EchoSeries& series, std::complex<double> rho0_offdiag);

/// Uniform grid 0, dt, 2 dt, ... up to t_max inclusive.
std::vector<double> time_grid(double t_max, double dt);

}  // namespace loschmidt
