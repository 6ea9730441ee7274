#pragma once

#include "loschmidt/csv.hpp"
#include "loschmidt/edoracle.hpp"
#include "loschmidt/envelope.hpp"
#include "loschmidt/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace loschmidt::run {

enum class Engine { modes, quadratic, ed, strong_coupling, short_time };

Engine parse_engine(const std::string& name);
std::string to_string(Engine engine);

enum class FitModel { gaussian, powerlaw };

FitModel parse_fit_model(const std::string& name);
std::string to_string(FitModel model);

struct FitOptions {
    std::vector<FitModel> models;
    double peak_threshold = envelope::kInverseE;
    /// Required by the power-law fit.
    std::optional<envelope::TimeWindow> window;
    /// Coupling that sets the fast period pi/g; enables the sampling check and the
    /// dominant-peak filter used for power-law fits.
    std::optional<double> g;
};

/// Parses `t0:t1`.
envelope::TimeWindow parse_window(const std::string& text);

struct RunConfig {
    ChainSpec spec;
    CouplingSpec coupling = CouplingSpec::uniform(0.0);
    Engine engine = Engine::modes;
    double t_max = 1.5;
    /// Unset: default_dt of the strongest coupling.
    std::optional<double> dt;
    std::string out;
    FitOptions fit;
    unsigned jobs = 1;
};

/// min(5e-4, pi / (16 (2g + 4))): at least 16 samples per fast oscillation.
double default_dt(double g);
double resolved_dt(const RunConfig& config);
/// Largest |g_j| of the coupling.
double coupling_scale(const CouplingSpec& coupling, int n_sites);

/// Throws ConfigError naming the violated invariant.
void validate(const RunConfig& config);

/// Parity sector of the fermionic ground state of branch 0. The exact-diagonalization
/// engines evolve in this sector so that they follow the same ground state.
ed::ParitySector matched_sector(const ChainSpec& spec);

EchoSeries compute_echo(const RunConfig& config);

struct FitReport {
    std::optional<envelope::GaussianFit> gaussian;
    std::optional<envelope::PowerLawFit> power;
    std::optional<double> crossover;
};

FitReport fit_series(const EchoSeries& series, int n_sites, const FitOptions& options);

/// Long-format report: `model,quantity,value`.
void write_fit_report(std::ostream& out, const FitReport& report);

/// Writes the series (to stdout when `out` is empty) plus, for a file target, the
/// `.meta` sidecar, a `.plot.py` script and, when fits are requested, `.fit.csv`.
void cmd_echo(const RunConfig& config, std::ostream& stdout_stream, std::ostream& log);

/// Series with the qubit purity alongside: `t,L,purity`.
void cmd_purity(const RunConfig& config, const QubitState& qubit, std::ostream& stdout_stream);

/// Fits a `t,L` file and writes the report to `out` or stdout.
void cmd_fit(const std::string& input, int n_sites, const FitOptions& options, const std::string& out,
             std::ostream& stdout_stream);

struct SweepConfig {
    RunConfig base;
    std::vector<double> gamma_axis;
    std::vector<double> lambda_axis;
    std::vector<double> g_axis;
    std::vector<int> n_axis;
    unsigned jobs = 1;
};

/// Parses `name=v1,v2,...` into the matching axis (g, lambda, gamma or n).
void add_axis(SweepConfig& config, const std::string& text);
void validate(const SweepConfig& config);
std::size_t grid_size(const SweepConfig& config);

struct SweepRow {
    double gamma = 0.0;
    double lambda = 0.0;
    double g = 0.0;
    int n = 0;
    FitModel model = FitModel::gaussian;
    /// Gaussian alpha or power-law exponent.
    double alpha = 0.0;
    double residual = 0.0;
    /// Gaussian: fewer than 3 peaks above the threshold, intercept pinned. Power law: poor fit.
    bool threshold_flag = false;
    std::string error;
};

/// Rows ordered by (gamma, lambda, g, n, model), each axis ascending.
std::vector<SweepRow> run_sweep(const SweepConfig& config);
void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows);
void cmd_sweep(const SweepConfig& config, std::ostream& stdout_stream, std::ostream& log);

struct PairDeviation {
    std::string pair;
    int cases = 0;
    double max_deviation = 0.0;
    /// Largest deviation divided by its tolerance; above 1 fails.
    double worst_ratio = 0.0;
    std::string tolerance;
};

struct ValidationReport {
    std::vector<PairDeviation> pairs;
    [[nodiscard]] bool passed() const;
};

inline constexpr double kExactTolerance = 1e-8;

/// Randomized cross-engine grid: gamma in [0,1], lambda in [0,2], g in [0,80],
/// N in {4..n_max}. Deterministic for a given seed.
ValidationReport run_validation(int n_max, std::uint64_t seed, int cases = 24, unsigned jobs = 1);
void write_validation(std::ostream& out, const ValidationReport& report);

}  // namespace loschmidt::run
